#include "ocevi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ocevi/experiment.hpp"

namespace ocevi {
namespace {

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << std::setw(12) << format_number(m(i, j));
    out << '\n';
  }
}

void emit(std::ostream& out, const std::string& path, const Json& doc) {
  const std::string text = doc.dump(1) + "\n";
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  // "0-29" or "1,2,5" (ranges allowed inside the list).
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending seed range");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

HardTarget parse_target(const std::string& text) {
  HardTarget t;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> t.stage >> c1 >> t.leaf >> c2 >> t.action) || c1 != ',' || c2 != ',')
    throw std::invalid_argument("target must be 'h,leaf,a', got '" + text + "'");
  return t;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recursive-OCE tabular MDP planning and OCE-VI regret experiments", "ocevi"};
  app.require_subcommand(1);

  // gen-random
  auto* gen_random = app.add_subcommand("gen-random", "Emit a random Dirichlet MDP");
  int rS = 6, rA = 3, rH = 3;
  std::uint64_t r_seed = 0;
  std::string r_out;
  gen_random->add_option("--S", rS, "states")->check(CLI::PositiveNumber);
  gen_random->add_option("--A", rA, "actions")->check(CLI::PositiveNumber);
  gen_random->add_option("--H", rH, "horizon")->check(CLI::PositiveNumber);
  gen_random->add_option("--seed", r_seed, "generator seed");
  gen_random->add_option("--out", r_out, "output file (default stdout)");

  // gen-hard
  auto* gen_hard = app.add_subcommand("gen-hard", "Emit a lower-bound hard instance with metadata");
  HardInstanceParams hp;
  std::string h_target, h_out;
  gen_hard->add_option("--A", hp.A, "actions")->required();
  gen_hard->add_option("--d", hp.d, "tree depth parameter")->required();
  gen_hard->add_option("--H", hp.H, "horizon")->required();
  gen_hard->add_option("--c1", hp.c1, "constant c1 (>= 4)");
  gen_hard->add_option("--c2", hp.c2, "constant c2 (> 2)");
  gen_hard->add_option("--K", hp.K, "planned episodes")->required();
  gen_hard->add_option("--target", h_target, "perturbed cell 'h,leaf,a' (1-based h)");
  gen_hard->add_option("--out", h_out, "output file (default stdout)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Optimal values and greedy policy");
  std::string p_mdp, p_utility = "mean", p_out;
  plan_cmd->add_option("--mdp", p_mdp, "MDP file")->required();
  plan_cmd->add_option("--utility", p_utility, "mean | entropic:beta=.. | cvar:alpha=.. | meanvar:c=..");
  plan_cmd->add_option("--out", p_out, "also write values and policy as JSON");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a fixed policy");
  std::string e_mdp, e_policy, e_utility = "mean";
  eval_cmd->add_option("--mdp", e_mdp, "MDP file")->required();
  eval_cmd->add_option("--policy", e_policy, "policy file")->required();
  eval_cmd->add_option("--utility", e_utility, "utility, e.g. cvar:alpha=0.3");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an OCE-VI regret experiment");
  std::string x_config, x_instance, x_mdp, x_utility, x_delta, x_seeds, x_out, x_target;
  int xS = 6, xA = 3, xH = 3, xd = 1, x_workers = 0;
  double xc1 = 4.0, xc2 = 3.0;
  long xK = 1000, x_record = 1;
  std::uint64_t x_gen_seed = 0, x_base_seed = 0;
  run_cmd->add_option("--config", x_config, "JSON config file (flags override it)");
  auto* o_instance = run_cmd->add_option("--instance", x_instance, "random | hard | file")
                         ->check(CLI::IsMember({"random", "hard", "file"}));
  auto* o_S = run_cmd->add_option("--S", xS, "states (random)");
  auto* o_A = run_cmd->add_option("--A", xA, "actions (random, hard)");
  auto* o_H = run_cmd->add_option("--H", xH, "horizon (random, hard)");
  auto* o_gen = run_cmd->add_option("--gen-seed", x_gen_seed, "instance generator seed");
  auto* o_d = run_cmd->add_option("--d", xd, "tree depth (hard)");
  auto* o_c1 = run_cmd->add_option("--c1", xc1, "c1 (hard)");
  auto* o_c2 = run_cmd->add_option("--c2", xc2, "c2 (hard)");
  auto* o_target = run_cmd->add_option("--target", x_target, "h,leaf,a (hard)");
  auto* o_mdp = run_cmd->add_option("--mdp", x_mdp, "MDP file (file)");
  auto* o_utility = run_cmd->add_option("--utility", x_utility, "utility, e.g. cvar:alpha=0.3");
  auto* o_K = run_cmd->add_option("--K", xK, "episodes");
  auto* o_delta = run_cmd->add_option("--delta", x_delta, "confidence parameter or 'auto'");
  auto* o_seeds = run_cmd->add_option("--seeds", x_seeds, "seed list, e.g. 0-29 or 1,4,9");
  auto* o_base = run_cmd->add_option("--base-seed", x_base_seed, "added to every seed");
  auto* o_record = run_cmd->add_option("--record-every", x_record, "CSV row spacing");
  auto* o_out = run_cmd->add_option("--out", x_out, "per-seed CSV path");
  auto* o_workers = run_cmd->add_option("--workers", x_workers, "parallel seed workers");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check MDP invariants");
  std::string v_mdp;
  validate_cmd->add_option("mdp,--mdp", v_mdp, "MDP file")->required();

  try {
    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen_random->parsed()) {
      Rng rng(r_seed);
      emit(out, r_out, mdp_to_json(random_mdp(rS, rA, rH, rng)));
      return 0;
    }

    if (gen_hard->parsed()) {
      if (!h_target.empty()) hp.target = parse_target(h_target);
      const HardInstance inst = hard_instance(hp);
      Json doc = mdp_to_json(inst.mdp);
      doc["meta"] = meta_to_json(inst.meta);
      emit(out, h_out, doc);
      if (!h_out.empty() && h_out != "-")
        out << "S=" << inst.meta.S << " L=" << inst.meta.L << " p=" << format_number(inst.meta.p)
            << " epsilon=" << format_number(inst.meta.epsilon) << " Hbar=" << inst.meta.Hbar
            << '\n';
      return 0;
    }

    if (plan_cmd->parsed()) {
      const TabularMdp mdp = read_mdp_file(p_mdp);
      const Utility<double> u = parse_utility(p_utility);
      const Plan plan = optimal_plan(mdp, u);
      const int a0 = plan.policy(0, mdp.initial_state);
      out << "utility: " << to_string(u) << '\n';
      out << "V1* = " << format_number(plan.values.initial_value(mdp)) << '\n';
      out << "initial action: " << mdp.action_name(a0) << '\n';
      out << "greedy policy (row h, column s):\n";
      for (int h = 0; h < mdp.H; ++h) {
        out << "  h=" << h + 1 << ':';
        for (int s = 0; s < mdp.S; ++s) out << ' ' << mdp.action_name(plan.policy(h, s));
        out << '\n';
      }
      out << "V* (row h = 1..H+1):\n";
      print_matrix(out, plan.values.V);
      for (int h = 0; h < mdp.H; ++h) {
        out << "Q* h=" << h + 1 << " (row s, column a):\n";
        print_matrix(out, plan.values.Q[h]);
      }
      if (!p_out.empty()) {
        Json doc = values_to_json(plan.values);
        doc["policy"] = policy_to_json(plan.policy);
        doc["utility"] = to_string(u);
        emit(out, p_out, doc);
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      const TabularMdp mdp = read_mdp_file(e_mdp);
      const Policy policy = policy_from_json(read_json_file(e_policy));
      const Utility<double> u = parse_utility(e_utility);
      const ValueTables values = evaluate_policy(mdp, u, policy);
      out << "utility: " << to_string(u) << '\n';
      out << "V1 = " << format_number(values.initial_value(mdp)) << '\n';
      out << "V (row h = 1..H+1):\n";
      print_matrix(out, values.V);
      return 0;
    }

    if (run_cmd->parsed()) {
      ExperimentConfig config;
      if (!x_config.empty()) config = config_from_json(read_json_file(x_config));
      if (*o_instance || *o_S || *o_A || *o_H || *o_gen || *o_d || *o_c1 || *o_c2 || *o_target ||
          *o_mdp) {
        std::string kind = x_instance;
        if (kind.empty()) {
          if (std::holds_alternative<HardInstanceParams>(config.instance)) kind = "hard";
          else if (std::holds_alternative<FileSource>(config.instance)) kind = "file";
          else kind = "random";
        }
        if (kind == "random") {
          RandomSource src = std::holds_alternative<RandomSource>(config.instance)
                                 ? std::get<RandomSource>(config.instance)
                                 : RandomSource{};
          if (*o_S) src.S = xS;
          if (*o_A) src.A = xA;
          if (*o_H) src.H = xH;
          if (*o_gen) src.gen_seed = x_gen_seed;
          config.instance = src;
        } else if (kind == "hard") {
          HardInstanceParams params = std::holds_alternative<HardInstanceParams>(config.instance)
                                          ? std::get<HardInstanceParams>(config.instance)
                                          : HardInstanceParams{};
          if (*o_A) params.A = xA;
          if (*o_H) params.H = xH;
          if (*o_d) params.d = xd;
          if (*o_c1) params.c1 = xc1;
          if (*o_c2) params.c2 = xc2;
          if (*o_target) params.target = parse_target(x_target);
          params.K = *o_K ? xK : (std::holds_alternative<HardInstanceParams>(config.instance)
                                      ? params.K
                                      : config.K);
          config.instance = params;
        } else {
          FileSource src = std::holds_alternative<FileSource>(config.instance)
                               ? std::get<FileSource>(config.instance)
                               : FileSource{};
          if (*o_mdp) src.path = x_mdp;
          config.instance = src;
        }
      }
      if (*o_utility) config.utility = x_utility;
      if (*o_K) config.K = xK;
      if (*o_delta) {
        if (x_delta == "auto") {
          config.delta.reset();
        } else {
          try {
            config.delta = std::stod(x_delta);
          } catch (const std::logic_error&) {
            throw std::invalid_argument("--delta must be a number or 'auto'");
          }
        }
      }
      if (*o_seeds) config.seeds = parse_seed_list(x_seeds);
      if (*o_base) config.base_seed = x_base_seed;
      if (*o_record) config.record_every = x_record;
      if (*o_out) config.output = x_out;
      if (*o_workers) config.workers = x_workers;

      const ExperimentResult result = run_experiment(config);
      double final_mean = 0.0;
      for (const auto& t : result.traces) final_mean += t.cumulative.back();
      final_mean /= static_cast<double>(result.traces.size());
      out << "V1* = " << format_number(result.vstar) << '\n';
      out << "mean cumulative regret at K=" << config.K << ": " << format_number(final_mean)
          << " over " << result.traces.size() << " seeds\n";
      out << "wrote " << result.per_seed_path << " and " << result.mean_path << '\n';
      return 0;
    }

    if (validate_cmd->parsed()) {
      const TabularMdp mdp = read_mdp_file(v_mdp);
      const auto violations = validate(mdp);
      if (violations.empty()) {
        out << "ok\n";
        return 0;
      }
      for (const auto& v : violations) err << "violation: " << v << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace ocevi
