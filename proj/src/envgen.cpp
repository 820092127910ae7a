#include "ocevi/envgen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ocevi/oce.hpp"

namespace ocevi {

TabularMdp random_mdp(int S, int A, int H, Rng& rng) {
  TabularMdp mdp = TabularMdp::zeros(S, A, H);
  std::gamma_distribution<double> gamma(0.1, 1.0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        auto row = mdp.transition(h, s, a);
        double total = 0.0;
        while (!(total > 0.0)) {
          for (int t = 0; t < S; ++t) row[t] = gamma(rng);
          total = row.sum();
        }
        row /= total;
        const bool zero = uniform01(rng) < 0.85;
        mdp.rewards[h](s, a) = zero ? 0.0 : uniform01(rng);
      }
    }
  }
  return mdp;
}

int HardInstanceParams::states() const {
  int nodes = 0, level = 1;
  for (int i = 0; i < d; ++i) {
    nodes += level;
    level *= A;
  }
  return 3 + nodes;
}

int HardInstanceParams::leaves() const {
  int L = 1;
  for (int i = 1; i < d; ++i) L *= A;
  return L;
}

int HardInstanceParams::waiting_horizon() const {
  return static_cast<int>(std::floor(static_cast<double>(H) / c2));
}

double hard_instance_epsilon(double p, double c1, int Hbar, int L, int A, long K) {
  const double cells = static_cast<double>(Hbar) * L * A;
  return std::sqrt(p / (2.0 * c1)) * (1.0 - 1.0 / cells) * std::sqrt(cells / static_cast<double>(K));
}

double HardInstanceParams::epsilon() const {
  return hard_instance_epsilon(p(), c1, waiting_horizon(), leaves(), A, K);
}

void HardInstanceParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("infeasible hard-instance parameters: " + what);
  };
  if (A < 2) fail("A >= 2 required");
  if (d < 1) fail("d >= 1 required");
  if (!(c1 >= 4.0)) fail("c1 >= 4 required");
  if (!(c2 > 2.0)) fail("c2 > 2 required");
  if (!(H >= 2.0 * c2 * d)) fail("H >= 2*c2*d required (H=" + std::to_string(H) + ")");
  const int S = states();
  if (!(static_cast<double>(K) >= c1 * H * S * A / (2.0 * c2)))
    fail("K >= c1*H*S*A/(2*c2) required (K=" + std::to_string(K) + ")");
  const int Hbar = waiting_horizon();
  if (Hbar < 1) fail("floor(H/c2) >= 1 required");
  if (!(Hbar < H - d)) fail("Hbar < H - d required");
  const double pp = p(), eps = epsilon();
  if (!(pp + eps <= 1.0)) fail("p + epsilon <= 1 required");
  const double eps_max = ((1.0 - 2.0 * pp) + std::sqrt(1.0 - 4.0 * pp / c1)) / 2.0;
  if (!(eps >= 0.0 && eps <= eps_max)) fail("epsilon outside [0, (1-2p+sqrt(1-4p/c1))/2]");
  if (target) {
    if (target->stage < 1 + d || target->stage > Hbar + d)
      fail("target stage must lie in [1+d, Hbar+d]");
    if (target->leaf < 0 || target->leaf >= leaves()) fail("target leaf out of range");
    if (target->action < 0 || target->action >= A) fail("target action out of range");
  }
}

HardInstance hard_instance(const HardInstanceParams& params) {
  params.validate();
  HardInstanceMeta meta;
  meta.S = params.states();
  meta.L = params.leaves();
  meta.Hbar = params.waiting_horizon();
  meta.p = params.p();
  meta.epsilon = params.epsilon();
  meta.d = params.d;
  meta.target = params.target;

  const int S = meta.S, A = params.A, H = params.H;
  const int tree = S - 3;
  const int first_leaf_node = tree - meta.L;
  TabularMdp mdp = TabularMdp::zeros(S, A, H);
  mdp.initial_state = meta.waiting();

  mdp.state_names.resize(S);
  mdp.state_names[meta.waiting()] = "wait";
  for (int j = 0; j < tree; ++j)
    mdp.state_names[1 + j] = j >= first_leaf_node ? "leaf" + std::to_string(j - first_leaf_node)
                                                  : (j == 0 ? std::string("root")
                                                            : "node" + std::to_string(j));
  mdp.state_names[meta.good()] = "good";
  mdp.state_names[meta.bad()] = "bad";

  for (int h = 0; h < H; ++h) {
    const int step = h + 1;
    for (int a = 0; a < A; ++a) {
      const bool stay = a == 0 && step <= meta.Hbar;
      mdp.transition(h, meta.waiting(), a)[stay ? meta.waiting() : meta.root()] = 1.0;
      mdp.transition(h, meta.good(), a)[meta.good()] = 1.0;
      mdp.transition(h, meta.bad(), a)[meta.bad()] = 1.0;
      if (step >= meta.Hbar + meta.d + 1) mdp.rewards[h](meta.good(), a) = 1.0;
    }
    for (int j = 0; j < tree; ++j) {
      const int s = 1 + j;
      for (int a = 0; a < A; ++a) {
        if (j < first_leaf_node) {
          mdp.transition(h, s, a)[1 + A * j + 1 + a] = 1.0;
          continue;
        }
        const int leaf = j - first_leaf_node;
        const bool perturbed = params.target && params.target->stage == step &&
                               params.target->leaf == leaf && params.target->action == a;
        const double up = meta.p + (perturbed ? meta.epsilon : 0.0);
        mdp.transition(h, s, a)[meta.good()] = up;
        mdp.transition(h, s, a)[meta.bad()] = 1.0 - up;
      }
    }
  }
  require_valid(mdp);
  return {std::move(mdp), meta};
}

double hard_instance_optimal_value(const HardInstanceMeta& meta, const HardInstanceParams& params,
                                   const Utility<double>& u) {
  const double payoff = static_cast<double>(params.H - meta.Hbar - meta.d);
  const double up = meta.p + (meta.target ? meta.epsilon : 0.0);
  Eigen::Vector2d values(payoff, 0.0);
  Eigen::Vector2d probs(up, 1.0 - up);
  OceOptions<double> options;
  options.force_golden = true;
  options.bracket = std::make_pair(0.0, payoff);
  return oce_eval<double>(u, values, probs, options).value;
}

}  // namespace ocevi
