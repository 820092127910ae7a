#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ocevi/mdp.hpp"
#include "ocevi/oce.hpp"

namespace ocevi {

/// V is (H+1) x S with row H identically zero; Q[h] is S x A.
struct ValueTables {
  Eigen::MatrixXd V;
  std::vector<Eigen::MatrixXd> Q;

  double initial_value(const TabularMdp& mdp) const { return V(0, mdp.initial_state); }
};

struct Plan {
  ValueTables values;
  Policy policy;
};

/**
 * OCE of a next-stage value vector under one transition row.
 *
 * Zero-probability states are dropped before the solve. Keeps its scratch
 * buffers between calls, so one instance per thread.
 */
class NextStateOce {
 public:
  explicit NextStateOce(int S) : values_(S), probs_(S) {}

  OceResult<double> operator()(const Utility<double>& u,
                               const Eigen::Ref<const Eigen::RowVectorXd>& row,
                               const Eigen::Ref<const Eigen::VectorXd>& next_values,
                               std::optional<std::pair<double, double>> bracket = std::nullopt);

 private:
  Eigen::VectorXd values_;
  Eigen::VectorXd probs_;
};

/// Backward recursion Q = r + OCE(V_next), V = Q at the policy's action.
ValueTables evaluate_policy(const TabularMdp& mdp, const Utility<double>& u, const Policy& policy);

/// Only the V table of evaluate_policy; skips the off-policy Q entries.
Eigen::MatrixXd evaluate_policy_values(const TabularMdp& mdp, const Utility<double>& u,
                                       const Policy& policy);

/// Optimal recursive-OCE values and a greedy policy, ties to the lowest action.
Plan optimal_plan(const TabularMdp& mdp, const Utility<double>& u);

inline constexpr double kBruteForcePolicyLimit = 1e6;

/// max over every deterministic Markov policy of V_1(s_init). Refuses A^(S*H) > 1e6.
double brute_force_optimal(const TabularMdp& mdp, const Utility<double>& u);

/// Greedy action over one Q row, ties to the lowest index.
int greedy_action(const Eigen::Ref<const Eigen::RowVectorXd>& q_row);

}  // namespace ocevi
