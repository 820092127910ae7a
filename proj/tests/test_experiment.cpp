#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ocevi/cli.hpp"
#include "ocevi/experiment.hpp"

using namespace ocevi;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ocevi_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ocevi");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

ExperimentConfig entropic_config(const fs::path& dir) {
  ExperimentConfig c;
  c.instance = RandomSource{6, 3, 3, 1};
  c.utility = "entropic:beta=-0.6";
  c.K = 10000;
  c.seeds = {0, 1, 2};
  c.record_every = 1000;
  c.output = (dir / "entropic.csv").string();
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("recorded episodes and paths") {
  CHECK(recorded_episodes(10, 1) == std::vector<long>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(recorded_episodes(10, 4) == std::vector<long>{1, 4, 8, 10});
  CHECK(recorded_episodes(10, 10) == std::vector<long>{1, 10});
  CHECK(mean_path_for("out/run.csv") == "out/run_mean.csv");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(format_number(0.0) == "0");
}

TEST_CASE("experiment writes per-seed and mean series") {
  const fs::path dir = scratch_dir("experiment");
  const ExperimentConfig config = entropic_config(dir);
  const ExperimentResult result = run_experiment(config);
  CHECK(result.traces.size() == 3);

  const auto rows = read_csv(result.per_seed_path);
  REQUIRE(!rows.empty());
  CHECK(slurp(result.per_seed_path).rfind(std::string(kPerSeedHeader) + "\n", 0) == 0);
  const std::size_t per_seed = recorded_episodes(10000, 1000).size();
  CHECK(rows.size() == 1 + 3 * per_seed);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 6);
    CHECK(rows[i][0] == "OCE-VI");
    CHECK(rows[i][1] == "entropic:beta=-0.6");
    const double cum = std::stod(rows[i][5]);
    CHECK(cum >= 0.0);
    CHECK(cum <= 10000.0 * 3);
  }

  // Mean series: recompute from the per-seed rows in seed order.
  std::map<long, double> sums;
  for (std::size_t i = 1; i < rows.size(); ++i) sums[std::stol(rows[i][3])] += std::stod(rows[i][5]);
  const auto mean_rows = read_csv(result.mean_path);
  CHECK(slurp(result.mean_path).rfind(std::string(kMeanHeader) + "\n", 0) == 0);
  REQUIRE(mean_rows.size() == 1 + per_seed);
  double previous = -1.0;
  for (std::size_t i = 1; i < mean_rows.size(); ++i) {
    const long episode = std::stol(mean_rows[i][2]);
    CHECK(mean_rows[i][3] == format_number(sums[episode] / 3.0));
    CHECK(mean_rows[i][4] == "3");
    const double m = std::stod(mean_rows[i][3]);
    CHECK(m >= previous - 1e-9);
    previous = m;
  }

  // Byte-identical rerun, and parallel execution does not change output.
  const std::string first = slurp(result.per_seed_path), first_mean = slurp(result.mean_path);
  ExperimentConfig parallel = config;
  parallel.workers = 3;
  run_experiment(parallel);
  CHECK(slurp(result.per_seed_path) == first);
  CHECK(slurp(result.mean_path) == first_mean);
}

TEST_CASE("single-action instance has zero regret columns") {
  const fs::path dir = scratch_dir("single");
  ExperimentConfig c;
  c.instance = RandomSource{4, 1, 3, 9};
  c.utility = "cvar:alpha=0.3";
  c.K = 200;
  c.seeds = {4, 5};
  c.record_every = 50;
  c.output = (dir / "single.csv").string();
  run_experiment(c);
  const auto rows = read_csv(c.output);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][4] == "0");
    CHECK(rows[i][5] == "0");
  }
}

TEST_CASE("experiment config errors") {
  const fs::path dir = scratch_dir("errors");
  ExperimentConfig c = entropic_config(dir);
  c.K = 100;
  c.record_every = 200;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c = entropic_config(dir);
  c.seeds.clear();
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c = entropic_config(dir);
  c.utility = "bogus";
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c = entropic_config(dir);
  c.output = (dir / "missing" / "deeper" / "x.csv").string();
  CHECK_THROWS(run_experiment(c));
  c = entropic_config(dir);
  HardInstanceParams bad;
  bad.A = 2;
  bad.d = 2;
  bad.H = 5;
  c.instance = bad;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("config documents") {
  const Json doc = Json::parse(R"({
    "instance": {"type": "hard", "A": 2, "d": 2, "H": 12, "c1": 4, "c2": 3,
                 "target": {"h": 4, "leaf": 1, "a": 0}},
    "utility": "meanvar:c=0.1", "K": 500, "delta": "auto", "seeds": [3, 4],
    "record_every": 100, "output": "x.csv"})");
  const ExperimentConfig c = config_from_json(doc);
  REQUIRE(std::holds_alternative<HardInstanceParams>(c.instance));
  const auto& p = std::get<HardInstanceParams>(c.instance);
  CHECK(p.K == 500);
  CHECK(p.target->stage == 4);
  CHECK(!c.delta);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(ExperimentConfig{}.seeds.size() == 30);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"K": "many"})")), std::invalid_argument);
}

TEST_CASE("cli plan on risky versus safe") {
  const auto r = cli({"plan", "--mdp", std::string(OCEVI_DATA_DIR) + "/risky_vs_safe.json",
                      "--utility", "cvar:alpha=0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("V1* = 0.4\n") != std::string::npos);
  CHECK(r.out.find("initial action: safe") != std::string::npos);
  const auto m = cli({"plan", "--mdp", std::string(OCEVI_DATA_DIR) + "/risky_vs_safe.json"});
  CHECK(m.out.find("V1* = 0.5\n") != std::string::npos);
  CHECK(m.out.find("initial action: risky") != std::string::npos);
}

TEST_CASE("cli gen-hard reports metadata") {
  const fs::path dir = scratch_dir("cli_hard");
  const std::string out = (dir / "hard.json").string();
  const auto r = cli({"gen-hard", "--A", "2", "--d", "2", "--H", "12", "--c1", "4", "--c2", "3",
                      "--K", "2000", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("S=6 L=2 p=0.5") != std::string::npos);
  CHECK(r.out.find("Hbar=4") != std::string::npos);
  const Json doc = read_json_file(out);
  CHECK(doc["meta"]["Hbar"] == 4);
  CHECK(doc["meta"]["L"] == 2);
  CHECK(doc["meta"]["target"].is_null());
  CHECK(cli({"validate", out}).code == 0);

  const auto infeasible = cli({"gen-hard", "--A", "2", "--d", "2", "--H", "8", "--K", "2000"});
  CHECK(infeasible.code == 1);
  CHECK(infeasible.err.find("H >= 2*c2*d") != std::string::npos);
}

TEST_CASE("cli validate, eval, gen-random and usage errors") {
  const fs::path dir = scratch_dir("cli_misc");
  const std::string mdp = (dir / "random.json").string();
  CHECK(cli({"gen-random", "--S", "3", "--A", "2", "--H", "2", "--seed", "4", "--out", mdp}).code == 0);
  CHECK(cli({"validate", "--mdp", mdp}).out == "ok\n");

  Json doc = read_json_file(mdp);
  doc["P"][1][2][0] = Json::array({0.2, 0.2, 0.2});
  const std::string corrupted = (dir / "corrupted.json").string();
  write_text_file(corrupted, doc.dump());
  const auto bad = cli({"validate", corrupted});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("(h=1, s=2, a=0)") != std::string::npos);

  const std::string policy = (dir / "policy.json").string();
  write_text_file(policy, R"({"actions": [[1, 1, 1, 1], [0, 0, 0, 0]]})");
  const auto ev = cli({"eval", "--mdp", std::string(OCEVI_DATA_DIR) + "/risky_vs_safe.json",
                       "--policy", policy, "--utility", "mean"});
  CHECK(ev.code == 0);
  CHECK(ev.out.find("V1 = 0.4\n") != std::string::npos);

  CHECK(cli({"plan", "--mdp", mdp, "--bogus"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"plan", "--mdp", (dir / "nope.json").string()}).code == 1);
  CHECK(cli({"plan", "--mdp", mdp, "--utility", "cvar:alpha=7"}).code == 1);
}

TEST_CASE("cli run with flags overriding a config file") {
  const fs::path dir = scratch_dir("cli_run");
  const std::string config = (dir / "config.json").string();
  write_text_file(config, R"({"instance": {"type": "random", "S": 3, "A": 2, "H": 2, "gen_seed": 5},
                              "utility": "mean", "K": 50, "seeds": [0, 1], "record_every": 10,
                              "output": "ignored.csv"})");
  const std::string out = (dir / "run.csv").string();
  const auto r = cli({"run", "--config", config, "--utility", "meanvar:c=0.25", "--K", "80",
                      "--seeds", "0-2", "--out", out});
  CHECK(r.code == 0);
  const auto rows = read_csv(out);
  CHECK(rows.size() == 1 + 3 * recorded_episodes(80, 10).size());
  CHECK(rows[1][1] == "meanvar:c=0.25");
  CHECK(fs::exists(dir / "run_mean.csv"));
  CHECK(cli({"run", "--config", config, "--record-every", "0", "--out", out}).code == 1);
}
