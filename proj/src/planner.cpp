#include "ocevi/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace ocevi {
namespace {

void require_inputs(const TabularMdp& mdp, const Utility<double>& u) {
  require_valid(mdp);
  u.validate();
}

// Lambda bracket for value functions at stage h: next values lie in [0, H - h - 1].
std::pair<double, double> value_bracket(const TabularMdp& mdp, int h) {
  return {0.0, static_cast<double>(mdp.H - h - 1)};
}

}  // namespace

OceResult<double> NextStateOce::operator()(const Utility<double>& u,
                                           const Eigen::Ref<const Eigen::RowVectorXd>& row,
                                           const Eigen::Ref<const Eigen::VectorXd>& next_values,
                                           std::optional<std::pair<double, double>> bracket) {
  Eigen::Index n = 0;
  for (Eigen::Index t = 0; t < row.size(); ++t) {
    if (row[t] > 0.0) {
      values_[n] = next_values[t];
      probs_[n] = row[t];
      ++n;
    }
  }
  OceOptions<double> options;
  options.bracket = bracket;
  options.validate = false;
  return oce_eval<double>(u, values_.head(n), probs_.head(n), options);
}

int greedy_action(const Eigen::Ref<const Eigen::RowVectorXd>& q_row) {
  int best = 0;
  for (Eigen::Index a = 1; a < q_row.size(); ++a)
    if (q_row[a] > q_row[best]) best = static_cast<int>(a);
  return best;
}

ValueTables evaluate_policy(const TabularMdp& mdp, const Utility<double>& u, const Policy& policy) {
  require_inputs(mdp, u);
  require_compatible(mdp, policy);
  NextStateOce oce(mdp.S);
  ValueTables out{Eigen::MatrixXd::Zero(mdp.H + 1, mdp.S),
                  std::vector<Eigen::MatrixXd>(mdp.H, Eigen::MatrixXd::Zero(mdp.S, mdp.A))};
  for (int h = mdp.H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = out.V.row(h + 1).transpose();
    for (int s = 0; s < mdp.S; ++s) {
      for (int a = 0; a < mdp.A; ++a)
        out.Q[h](s, a) = mdp.reward(h, s, a) +
                         oce(u, mdp.transition(h, s, a), next, value_bracket(mdp, h)).value;
      out.V(h, s) = out.Q[h](s, policy(h, s));
    }
  }
  return out;
}

Eigen::MatrixXd evaluate_policy_values(const TabularMdp& mdp, const Utility<double>& u,
                                       const Policy& policy) {
  require_compatible(mdp, policy);
  NextStateOce oce(mdp.S);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(mdp.H + 1, mdp.S);
  for (int h = mdp.H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = V.row(h + 1).transpose();
    for (int s = 0; s < mdp.S; ++s) {
      const int a = policy(h, s);
      V(h, s) = mdp.reward(h, s, a) +
                oce(u, mdp.transition(h, s, a), next, value_bracket(mdp, h)).value;
    }
  }
  return V;
}

Plan optimal_plan(const TabularMdp& mdp, const Utility<double>& u) {
  require_inputs(mdp, u);
  NextStateOce oce(mdp.S);
  Plan plan{{Eigen::MatrixXd::Zero(mdp.H + 1, mdp.S),
             std::vector<Eigen::MatrixXd>(mdp.H, Eigen::MatrixXd::Zero(mdp.S, mdp.A))},
            Policy::constant(mdp.H, mdp.S)};
  auto& V = plan.values.V;
  for (int h = mdp.H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = V.row(h + 1).transpose();
    auto& Q = plan.values.Q[h];
    for (int s = 0; s < mdp.S; ++s) {
      for (int a = 0; a < mdp.A; ++a)
        Q(s, a) = mdp.reward(h, s, a) +
                  oce(u, mdp.transition(h, s, a), next, value_bracket(mdp, h)).value;
      const int best = greedy_action(Q.row(s));
      plan.policy.actions(h, s) = best;
      V(h, s) = Q(s, best);
    }
  }
  return plan;
}

double brute_force_optimal(const TabularMdp& mdp, const Utility<double>& u) {
  require_inputs(mdp, u);
  const double count = std::pow(static_cast<double>(mdp.A), mdp.S * mdp.H);
  if (count > kBruteForcePolicyLimit)
    throw std::invalid_argument("brute force refuses A^(S*H) = " + std::to_string(count) +
                                " > 1e6 policies");

  Policy policy = Policy::constant(mdp.H, mdp.S);
  const Eigen::Index cells = policy.actions.size();
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    const Eigen::MatrixXd V = evaluate_policy_values(mdp, u, policy);
    best = std::max(best, V(0, mdp.initial_state));
    // Mixed-radix increment over the H x S action table.
    Eigen::Index i = 0;
    for (; i < cells; ++i) {
      int& digit = policy.actions.data()[i];
      if (++digit < mdp.A) break;
      digit = 0;
    }
    if (i == cells) break;
  }
  return best;
}

}  // namespace ocevi
