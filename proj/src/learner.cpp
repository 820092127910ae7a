#include "ocevi/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ocevi {

EmpiricalModel EmpiricalModel::empty(int S, int A, int H) {
  if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("model dimensions must be positive");
  EmpiricalModel m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.visits.assign(H, Eigen::MatrixXi::Zero(S, A));
  m.next_visits.assign(H, RowMatrixXi::Zero(S * A, S));
  return m;
}

void EmpiricalModel::record(const Trajectory& trajectory) {
  if (static_cast<int>(trajectory.actions.size()) != H ||
      static_cast<int>(trajectory.states.size()) != H + 1)
    throw std::invalid_argument("trajectory length does not match the horizon");
  for (int h = 0; h < H; ++h) {
    const int s = trajectory.states[h];
    const int a = trajectory.actions[h];
    ++visits[h](s, a);
    ++next_visits[h](s * A + a, trajectory.states[h + 1]);
  }
  ++episodes_seen;
}

bool EmpiricalModel::consistent() const {
  for (int h = 0; h < H; ++h) {
    if (visits[h].sum() != episodes_seen) return false;
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        if (next_counts(h, s, a).sum() != visits[h](s, a)) return false;
  }
  return true;
}

FiniteDistribution<double> empirical_transition(const EmpiricalModel& model, int h, int s, int a) {
  const int n = model.count(h, s, a);
  if (n < 1)
    throw std::invalid_argument("empirical transition requested for unvisited (h=" +
                                std::to_string(h) + ", s=" + std::to_string(s) +
                                ", a=" + std::to_string(a) + ")");
  FiniteDistribution<double> dist;
  dist.values = Eigen::VectorXd::LinSpaced(model.S, 0.0, model.S - 1.0);
  dist.probs = model.next_counts(h, s, a).transpose().cast<double>() / static_cast<double>(n);
  return dist;
}

void LearnerConfig::validate() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

namespace {

double bonus_scale(const Utility<double>& u, int step, int H, int S, int A, long K, double delta,
                   bool risk_seeking) {
  const double log_term =
      std::log(static_cast<double>(S) * A * H * static_cast<double>(K) / delta);
  const double radicand = 2.0 * (risk_seeking ? S : 1) * log_term;
  return std::abs(u(static_cast<double>(step - H))) * std::sqrt(radicand);
}

}  // namespace

double bonus(const Utility<double>& u, int step, int H, long N, int S, int A, long K, double delta,
             bool risk_seeking) {
  if (step < 1 || step > H) throw std::invalid_argument("bonus step must lie in [1, H]");
  if (N < 0) throw std::invalid_argument("visit count must be nonnegative");
  return bonus_scale(u, step, H, S, A, K, delta, risk_seeking) /
         std::sqrt(static_cast<double>(std::max<long>(1, N)));
}

OceViLearner::OceViLearner(std::vector<Eigen::MatrixXd> rewards, int S, int A, int H,
                           Utility<double> u, LearnerConfig config)
    : rewards_(std::move(rewards)),
      utility_(std::move(u)),
      config_(config),
      model_(EmpiricalModel::empty(S, A, H)),
      tables_{{Eigen::MatrixXd::Zero(H + 1, S),
               std::vector<Eigen::MatrixXd>(H, Eigen::MatrixXd::Zero(S, A))},
              Policy::constant(H, S)},
      values_(S),
      probs_(S) {
  utility_.validate();
  config_.validate();
  if (static_cast<int>(rewards_.size()) != H)
    throw std::invalid_argument("reward table must have H stages");
  for (int h = 1; h <= H; ++h)
    bonus_scale_.push_back(bonus_scale(utility_, h, H, S, A, config_.K, config_.delta,
                                       config_.risk_seeking_bonus));
}

void OceViLearner::load_counts(const EmpiricalModel& model) {
  if (model.S != model_.S || model.A != model_.A || model.H != model_.H)
    throw std::invalid_argument("empirical model dimensions do not match the learner");
  model_ = model;
}

const OptimisticTables& OceViLearner::backup() {
  const int S = model_.S, A = model_.A, H = model_.H;
  auto& V = tables_.values.V;
  OceOptions<double> options;
  options.validate = false;
  for (int h = H - 1; h >= 0; --h) {
    const double cap = static_cast<double>(H - h);
    options.bracket = std::make_pair(0.0, cap - 1.0);
    auto& Q = tables_.values.Q[h];
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const int n = model_.count(h, s, a);
        if (n < 1) {
          Q(s, a) = cap;
          continue;
        }
        const auto counts = model_.next_counts(h, s, a);
        Eigen::Index m = 0;
        for (int t = 0; t < S; ++t) {
          if (counts[t] > 0) {
            values_[m] = V(h + 1, t);
            probs_[m] = static_cast<double>(counts[t]) / n;
            ++m;
          }
        }
        const double risk = oce_eval<double>(utility_, values_.head(m), probs_.head(m), options).value;
        const double b = bonus_scale_[h] / std::sqrt(static_cast<double>(n));
        Q(s, a) = std::min(rewards_[h](s, a) + risk + b, cap);
      }
      const int best = greedy_action(Q.row(s));
      tables_.policy.actions(h, s) = best;
      V(h, s) = Q(s, best);
    }
  }
  return tables_;
}

OptimisticTables optimistic_backup(const EmpiricalModel& model,
                                   const std::vector<Eigen::MatrixXd>& rewards,
                                   const Utility<double>& u, const LearnerConfig& config) {
  if (!model.consistent()) throw std::invalid_argument("empirical model counts are inconsistent");
  OceViLearner learner(rewards, model.S, model.A, model.H, u, config);
  learner.load_counts(model);
  return learner.backup();
}

RegretTrace run_ocevi(const TabularMdp& mdp, const Utility<double>& u, const LearnerConfig& config,
                      Rng& rng, double vstar, const EpisodeObserver& observer) {
  require_valid(mdp);
  OceViLearner learner(mdp.rewards, mdp.S, mdp.A, mdp.H, u, config);

  RegretTrace trace;
  trace.instant.reserve(static_cast<std::size_t>(config.K));
  trace.cumulative.reserve(static_cast<std::size_t>(config.K));

  std::unordered_map<std::string, double> policy_values;
  Policy previous;
  double previous_value = 0.0;
  double cumulative = 0.0;
  for (long k = 1; k <= config.K; ++k) {
    const OptimisticTables& tables = learner.backup();
    if (k == 1 || !(tables.policy == previous)) {
      const auto& acts = tables.policy.actions;
      std::string key(reinterpret_cast<const char*>(acts.data()),
                      static_cast<std::size_t>(acts.size()) * sizeof(int));
      auto [it, inserted] = policy_values.try_emplace(std::move(key), 0.0);
      if (inserted)
        it->second = evaluate_policy_values(mdp, u, tables.policy)(0, mdp.initial_state);
      previous = tables.policy;
      previous_value = it->second;
    }
    const double instant = vstar - previous_value;
    cumulative += instant;
    trace.instant.push_back(instant);
    trace.cumulative.push_back(cumulative);

    const Trajectory trajectory = sample_episode(mdp, tables.policy, rng);
    if (observer) observer(EpisodeView{k, tables, learner.model(), trajectory, instant});
    learner.observe(trajectory);
  }
  return trace;
}

FiniteDistribution<double> tilted_transition(const FiniteDistribution<double>& row,
                                             const Eigen::Ref<const Eigen::VectorXd>& weights) {
  row.validate();
  if (weights.size() != row.size())
    throw std::invalid_argument("tilt weights and transition row differ in length");
  if (weights.size() > 0 && weights.minCoeff() < 0.0)
    throw std::invalid_argument("tilt weights must be nonnegative");
  const Eigen::VectorXd tilted = row.probs.cwiseProduct(weights);
  const double total = tilted.sum();
  if (std::abs(total - 1.0) > 1e-8)
    throw std::invalid_argument("tilt weights do not have mean one under the row");
  return {row.values, tilted / total};
}

}  // namespace ocevi
