#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ocevi/envgen.hpp"
#include "ocevi/io.hpp"
#include "ocevi/learner.hpp"

namespace ocevi {

struct RandomSource {
  int S = 6;
  int A = 3;
  int H = 3;
  std::uint64_t gen_seed = 0;
};

struct FileSource {
  std::string path;
};

using InstanceSource = std::variant<RandomSource, HardInstanceParams, FileSource>;

struct ExperimentConfig {
  InstanceSource instance = RandomSource{};
  std::string utility = "mean";
  long K = 1000;
  std::optional<double> delta;  // nullopt means 1/(2KH)
  std::vector<std::uint64_t> seeds = default_seeds();
  std::uint64_t base_seed = 0;
  long record_every = 1;
  std::string output = "regret.csv";
  int workers = 0;  // 0: OCEVI_WORKERS, else hardware concurrency

  static std::vector<std::uint64_t> default_seeds();
  void validate() const;
};

/// Reads the structured-text config; missing fields keep their defaults.
ExperimentConfig config_from_json(const Json& doc, ExperimentConfig base = {});

struct ExperimentResult {
  double vstar = 0.0;
  std::vector<RegretTrace> traces;  // in config seed order
  std::string per_seed_path;
  std::string mean_path;
};

inline constexpr const char* kAlgorithmName = "OCE-VI";
inline constexpr const char* kPerSeedHeader = "algo,utility,seed,episode,instant_regret,cum_regret";
inline constexpr const char* kMeanHeader = "algo,utility,episode,mean_cum_regret,n_seeds";

/// 10 significant digits, printf %g style.
std::string format_number(double x);

/// Episodes {1, r, 2r, ...} capped at K, always including K.
std::vector<long> recorded_episodes(long K, long record_every);

/// "out/run.csv" -> "out/run_mean.csv".
std::string mean_path_for(const std::string& output);

TabularMdp build_instance(const InstanceSource& source);

/// Worker count from OCEVI_WORKERS, else hardware concurrency (at least 1).
int default_worker_count();

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace ocevi
