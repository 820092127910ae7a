#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ocevi {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/**
 * Finite-horizon, non-stationary tabular MDP.
 *
 * Stages are 0-based in code: stage h in [0, H) corresponds to step h + 1.
 * transitions[h] is (S*A) x S with row s*A + a holding P_h(. | s, a);
 * rewards[h] is S x A.
 */
struct TabularMdp {
  int S = 0;
  int A = 0;
  int H = 0;
  int initial_state = 0;
  std::vector<RowMatrixXd> transitions;
  std::vector<Eigen::MatrixXd> rewards;
  // Optional pretty-printing tables; empty or of size S / A.
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;

  static TabularMdp zeros(int S, int A, int H);

  auto transition(int h, int s, int a) const { return transitions[h].row(s * A + a); }
  auto transition(int h, int s, int a) { return transitions[h].row(s * A + a); }
  double reward(int h, int s, int a) const { return rewards[h](s, a); }

  std::string state_name(int s) const;
  std::string action_name(int a) const;
};

/// Deterministic Markov policy, actions(h, s) in [0, A).
struct Policy {
  Eigen::MatrixXi actions;

  static Policy constant(int H, int S, int action = 0) {
    return {Eigen::MatrixXi::Constant(H, S, action)};
  }
  int operator()(int h, int s) const { return actions(h, s); }
  bool operator==(const Policy& other) const { return actions == other.actions; }
};

struct Trajectory {
  std::vector<int> states;  // H + 1 entries
  std::vector<int> actions;  // H entries
  std::vector<double> rewards;  // H entries
};

/// Every violated invariant, one message each naming the offending indices.
std::vector<std::string> validate(const TabularMdp& mdp);

/// Throws std::invalid_argument listing the violations, if any.
void require_valid(const TabularMdp& mdp);

/// Throws std::invalid_argument when the policy shape or entries do not fit the MDP.
void require_compatible(const TabularMdp& mdp, const Policy& policy);

/// Inverse-CDF draw over the row in ascending state order.
int sample_index(const Eigen::Ref<const Eigen::RowVectorXd>& probs, double uniform);

Trajectory sample_episode(const TabularMdp& mdp, const Policy& policy, Rng& rng);

/// Stable 64-bit digest of the MDP contents (FNV-1a over dimensions and bit patterns).
std::uint64_t digest(const TabularMdp& mdp);

}  // namespace ocevi
