#pragma once

#include <optional>

#include "ocevi/mdp.hpp"
#include "ocevi/utility.hpp"

namespace ocevi {

/// Dirichlet(0.1, ..., 0.1) transition rows; rewards are 0 w.p. 0.85, else Uniform[0, 1].
TabularMdp random_mdp(int S, int A, int H, Rng& rng);

/// Perturbed leaf transition of the lower-bound family; `stage` is 1-based.
struct HardTarget {
  int stage = 0;
  int leaf = 0;
  int action = 0;
};

struct HardInstanceParams {
  int A = 2;
  int d = 1;
  int H = 1;
  double c1 = 4.0;
  double c2 = 3.0;
  long K = 1;
  std::optional<HardTarget> target;  // absent: the unperturbed instance

  int states() const;  // 3 + (A^d - 1) / (A - 1)
  int leaves() const;  // A^(d - 1)
  int waiting_horizon() const;  // floor(H / c2)
  double p() const { return 1.0 - 2.0 / c1; }
  double epsilon() const;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// State layout: 0 waiting, 1..S-3 tree nodes breadth first (1 = root), S-2 good, S-1 bad.
struct HardInstanceMeta {
  double p = 0.0;
  double epsilon = 0.0;
  int Hbar = 0;
  int L = 0;
  int S = 0;
  int d = 0;
  std::optional<HardTarget> target;

  int waiting() const { return 0; }
  int root() const { return 1; }
  int good() const { return S - 2; }
  int bad() const { return S - 1; }
  int leaf_state(int leaf) const { return S - 2 - L + leaf; }
};

struct HardInstance {
  TabularMdp mdp;
  HardInstanceMeta meta;
};

/// sqrt(p / (2 c1)) * (1 - 1/(Hbar L A)) * sqrt(Hbar L A / K).
double hard_instance_epsilon(double p, double c1, int Hbar, int L, int A, long K);

HardInstance hard_instance(const HardInstanceParams& params);

/// OCE of {H - Hbar - d w.p. p + eps, 0 otherwise}, solved by golden section on [0, H - Hbar - d].
double hard_instance_optimal_value(const HardInstanceMeta& meta, const HardInstanceParams& params,
                                   const Utility<double>& u);

}  // namespace ocevi
