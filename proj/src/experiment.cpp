#include "ocevi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ocevi {

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
  std::vector<std::uint64_t> seeds(30);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

void ExperimentConfig::validate() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (record_every < 1 || record_every > K)
    throw std::invalid_argument("record_every must lie in [1, K]");
  if (delta && !(*delta > 0.0 && *delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (output.empty()) throw std::invalid_argument("an output path is required");
  parse_utility(utility);
}

ExperimentConfig config_from_json(const Json& doc, ExperimentConfig config) {
  try {
    if (doc.contains("instance")) {
      const Json& inst = doc.at("instance");
      const std::string type = inst.value("type", "random");
      if (type == "random") {
        RandomSource src;
        src.S = inst.value("S", src.S);
        src.A = inst.value("A", src.A);
        src.H = inst.value("H", src.H);
        src.gen_seed = inst.value("gen_seed", src.gen_seed);
        config.instance = src;
      } else if (type == "hard") {
        HardInstanceParams params;
        params.A = inst.value("A", params.A);
        params.d = inst.value("d", params.d);
        params.H = inst.value("H", params.H);
        params.c1 = inst.value("c1", params.c1);
        params.c2 = inst.value("c2", params.c2);
        params.K = inst.value("K", doc.value("K", config.K));
        if (inst.contains("target") && !inst.at("target").is_null()) {
          const Json& t = inst.at("target");
          params.target = HardTarget{t.at("h").get<int>(), t.at("leaf").get<int>(),
                                     t.at("a").get<int>()};
        }
        config.instance = params;
      } else if (type == "file") {
        config.instance = FileSource{inst.at("path").get<std::string>()};
      } else {
        throw std::invalid_argument("unknown instance type '" + type + "'");
      }
    }
    config.utility = doc.value("utility", config.utility);
    config.K = doc.value("K", config.K);
    if (doc.contains("delta")) {
      const Json& d = doc.at("delta");
      if (d.is_string() && d.get<std::string>() == "auto")
        config.delta.reset();
      else
        config.delta = d.get<double>();
    }
    if (doc.contains("seeds")) config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    config.base_seed = doc.value("base_seed", config.base_seed);
    config.record_every = doc.value("record_every", config.record_every);
    config.output = doc.value("output", config.output);
    config.workers = doc.value("workers", config.workers);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment config: ") + e.what());
  }
  return config;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<long> recorded_episodes(long K, long record_every) {
  std::vector<long> out{1};
  for (long k = record_every; k <= K; k += record_every)
    if (k != out.back()) out.push_back(k);
  if (out.back() != K) out.push_back(K);
  return out;
}

std::string mean_path_for(const std::string& output) {
  std::filesystem::path p(output);
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  return (p.parent_path() / (p.stem().string() + "_mean" + ext)).string();
}

TabularMdp build_instance(const InstanceSource& source) {
  struct Builder {
    TabularMdp operator()(const RandomSource& src) const {
      Rng rng(src.gen_seed);
      return random_mdp(src.S, src.A, src.H, rng);
    }
    TabularMdp operator()(const HardInstanceParams& params) const {
      return hard_instance(params).mdp;
    }
    TabularMdp operator()(const FileSource& src) const {
      TabularMdp mdp = read_mdp_file(src.path);
      require_valid(mdp);
      return mdp;
    }
  };
  return std::visit(Builder{}, source);
}

int default_worker_count() {
  if (const char* env = std::getenv("OCEVI_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Utility<double> u = parse_utility(config.utility);
  const std::string utility_name = to_string(u);
  const TabularMdp mdp = build_instance(config.instance);
  const std::uint64_t instance_digest = digest(mdp);

  LearnerConfig learner;
  learner.K = config.K;
  learner.delta = config.delta.value_or(LearnerConfig::default_delta(config.K, mdp.H));
  learner.risk_seeking_bonus = !u.risk_averse();
  learner.validate();

  ExperimentResult result;
  result.vstar = optimal_plan(mdp, u).values.initial_value(mdp);
  result.per_seed_path = config.output;
  result.mean_path = mean_path_for(config.output);

  // Fail on an unwritable destination before spending time on the runs.
  write_text_file(result.per_seed_path, "");
  write_text_file(result.mean_path, "");

  const std::size_t n = config.seeds.size();
  result.traces.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        Rng rng(config.base_seed + config.seeds[i]);
        RegretTrace trace = run_ocevi(mdp, u, learner, rng, result.vstar);
        trace.utility = utility_name;
        trace.seed = config.seeds[i];
        trace.instance_digest = instance_digest;
        result.traces[i] = std::move(trace);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(config.workers > 0 ? config.workers : default_worker_count(),
                                    static_cast<int>(n));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const std::vector<long> episodes = recorded_episodes(config.K, config.record_every);
  std::ostringstream per_seed, mean;
  per_seed << kPerSeedHeader << '\n';
  mean << kMeanHeader << '\n';
  std::vector<double> sums(episodes.size(), 0.0);
  for (const auto& trace : result.traces) {
    for (std::size_t j = 0; j < episodes.size(); ++j) {
      const std::size_t idx = static_cast<std::size_t>(episodes[j] - 1);
      const std::string cum = format_number(trace.cumulative[idx]);
      per_seed << kAlgorithmName << ',' << utility_name << ',' << trace.seed << ',' << episodes[j]
               << ',' << format_number(trace.instant[idx]) << ',' << cum << '\n';
      // Average the printed values so the mean file is reproducible from the per-seed file.
      sums[j] += std::stod(cum);
    }
  }
  for (std::size_t j = 0; j < episodes.size(); ++j)
    mean << kAlgorithmName << ',' << utility_name << ',' << episodes[j] << ','
         << format_number(sums[j] / static_cast<double>(n)) << ',' << n << '\n';

  write_text_file(result.per_seed_path, per_seed.str());
  write_text_file(result.mean_path, mean.str());
  return result;
}

}  // namespace ocevi
