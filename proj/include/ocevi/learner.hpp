#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ocevi/planner.hpp"

namespace ocevi {

using RowMatrixXi = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Visit counts N_h(s, a) and N_h(s, a, s') gathered from played episodes.
struct EmpiricalModel {
  int S = 0;
  int A = 0;
  int H = 0;
  std::vector<Eigen::MatrixXi> visits;  // [h] S x A
  std::vector<RowMatrixXi> next_visits;  // [h] (S*A) x S, row s*A + a
  long episodes_seen = 0;

  static EmpiricalModel empty(int S, int A, int H);

  int count(int h, int s, int a) const { return visits[h](s, a); }
  auto next_counts(int h, int s, int a) const { return next_visits[h].row(s * A + a); }

  void record(const Trajectory& trajectory);

  /// Both count invariants: row sums match N(s,a) and each stage sums to episodes_seen.
  bool consistent() const;
};

/// P_hat(s') = N(s,a,s') / N(s,a) as a distribution over state indices 0..S-1.
/// Throws std::invalid_argument when (h, s, a) was never visited.
FiniteDistribution<double> empirical_transition(const EmpiricalModel& model, int h, int s, int a);

struct LearnerConfig {
  long K = 1;
  double delta = 0.5;
  bool risk_seeking_bonus = false;

  static double default_delta(long K, int H) { return 1.0 / (2.0 * static_cast<double>(K) * H); }
  void validate() const;
};

/**
 * Exploration bonus |u(-H + step)| * sqrt(2 log(S A H K / delta) / max{1, N}).
 *
 * `step` is 1-based (1..H). The risk-seeking variant multiplies the
 * radicand by S.
 */
double bonus(const Utility<double>& u, int step, int H, long N, int S, int A, long K, double delta,
             bool risk_seeking);

struct OptimisticTables {
  ValueTables values;
  Policy policy;
};

/// One optimistic value-iteration sweep over the current counts (clipped at H - h + 1).
OptimisticTables optimistic_backup(const EmpiricalModel& model, const std::vector<Eigen::MatrixXd>& rewards,
                                   const Utility<double>& u, const LearnerConfig& config);

/// Incremental form of the learner: keeps counts and scratch buffers across episodes.
class OceViLearner {
 public:
  OceViLearner(std::vector<Eigen::MatrixXd> rewards, int S, int A, int H, Utility<double> u,
               LearnerConfig config);

  const OptimisticTables& backup();
  void observe(const Trajectory& trajectory) { model_.record(trajectory); }
  void load_counts(const EmpiricalModel& model);

  const EmpiricalModel& model() const { return model_; }
  const OptimisticTables& tables() const { return tables_; }

 private:
  std::vector<Eigen::MatrixXd> rewards_;
  Utility<double> utility_;
  LearnerConfig config_;
  EmpiricalModel model_;
  OptimisticTables tables_;
  std::vector<double> bonus_scale_;  // |u(-H+h)| * sqrt(2 log(...)) per stage
  Eigen::VectorXd values_;
  Eigen::VectorXd probs_;
};

struct RegretTrace {
  std::vector<double> instant;  // per episode, index k-1
  std::vector<double> cumulative;
  std::string utility;
  std::uint64_t seed = 0;
  std::uint64_t instance_digest = 0;

  long episodes() const { return static_cast<long>(instant.size()); }
};

/// What the observer sees after episode k has been played but before its counts are recorded.
struct EpisodeView {
  long k;  // 1-based
  const OptimisticTables& tables;
  const EmpiricalModel& model;
  const Trajectory& trajectory;
  double instant_regret;
};

using EpisodeObserver = std::function<void(const EpisodeView&)>;

/// Runs OCE-VI for config.K episodes; regret is measured exactly against `vstar`.
RegretTrace run_ocevi(const TabularMdp& mdp, const Utility<double>& u, const LearnerConfig& config,
                      Rng& rng, double vstar, const EpisodeObserver& observer = {});

/// B(s') = P(s') * Lambda(s'); renormalized after checking the mean-one condition to 1e-8.
FiniteDistribution<double> tilted_transition(const FiniteDistribution<double>& row,
                                             const Eigen::Ref<const Eigen::VectorXd>& weights);

}  // namespace ocevi
