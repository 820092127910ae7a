#include "ocevi/mdp.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace ocevi {

TabularMdp TabularMdp::zeros(int S, int A, int H) {
  if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("MDP dimensions must be positive");
  TabularMdp mdp;
  mdp.S = S;
  mdp.A = A;
  mdp.H = H;
  mdp.transitions.assign(H, RowMatrixXd::Zero(S * A, S));
  mdp.rewards.assign(H, Eigen::MatrixXd::Zero(S, A));
  return mdp;
}

std::string TabularMdp::state_name(int s) const {
  return static_cast<std::size_t>(s) < state_names.size() ? state_names[s] : std::to_string(s);
}

std::string TabularMdp::action_name(int a) const {
  return static_cast<std::size_t>(a) < action_names.size() ? action_names[a] : std::to_string(a);
}

std::vector<std::string> validate(const TabularMdp& mdp) {
  std::vector<std::string> out;
  if (mdp.S < 1 || mdp.A < 1 || mdp.H < 1) {
    out.push_back("dimensions must be positive: S=" + std::to_string(mdp.S) +
                  " A=" + std::to_string(mdp.A) + " H=" + std::to_string(mdp.H));
    return out;
  }
  if (mdp.initial_state < 0 || mdp.initial_state >= mdp.S)
    out.push_back("initial state " + std::to_string(mdp.initial_state) + " out of range");
  if (static_cast<int>(mdp.transitions.size()) != mdp.H ||
      static_cast<int>(mdp.rewards.size()) != mdp.H) {
    out.push_back("expected " + std::to_string(mdp.H) + " transition and reward stages");
    return out;
  }
  if (!mdp.state_names.empty() && static_cast<int>(mdp.state_names.size()) != mdp.S)
    out.push_back("state name table has wrong length");
  if (!mdp.action_names.empty() && static_cast<int>(mdp.action_names.size()) != mdp.A)
    out.push_back("action name table has wrong length");

  for (int h = 0; h < mdp.H; ++h) {
    if (mdp.transitions[h].rows() != mdp.S * mdp.A || mdp.transitions[h].cols() != mdp.S ||
        mdp.rewards[h].rows() != mdp.S || mdp.rewards[h].cols() != mdp.A) {
      out.push_back("stage h=" + std::to_string(h) + " has wrong tensor shape");
      continue;
    }
    for (int s = 0; s < mdp.S; ++s) {
      for (int a = 0; a < mdp.A; ++a) {
        const std::string where = "(h=" + std::to_string(h) + ", s=" + std::to_string(s) +
                                  ", a=" + std::to_string(a) + ")";
        const auto row = mdp.transition(h, s, a);
        bool negative = false;
        for (int t = 0; t < mdp.S; ++t) negative |= !(row[t] >= 0.0);
        if (negative) out.push_back("negative or NaN transition probability at " + where);
        const double total = row.sum();
        if (!(std::abs(total - 1.0) <= 1e-12)) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "transition row at " << where << " sums to " << total;
          out.push_back(msg.str());
        }
        const double r = mdp.reward(h, s, a);
        if (!(r >= 0.0 && r <= 1.0)) {
          std::ostringstream msg;
          msg << "reward " << r << " at " << where << " outside [0, 1]";
          out.push_back(msg.str());
        }
      }
    }
  }
  return out;
}

void require_valid(const TabularMdp& mdp) {
  const auto violations = validate(mdp);
  if (violations.empty()) return;
  std::string msg = "invalid MDP:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw std::invalid_argument(msg);
}

void require_compatible(const TabularMdp& mdp, const Policy& policy) {
  if (policy.actions.rows() != mdp.H || policy.actions.cols() != mdp.S)
    throw std::invalid_argument("policy table must be H x S = " + std::to_string(mdp.H) + " x " +
                                std::to_string(mdp.S));
  if (policy.actions.size() > 0 &&
      (policy.actions.minCoeff() < 0 || policy.actions.maxCoeff() >= mdp.A))
    throw std::invalid_argument("policy action out of range [0, " + std::to_string(mdp.A) + ")");
}

int sample_index(const Eigen::Ref<const Eigen::RowVectorXd>& probs, double uniform) {
  double cumulative = 0.0;
  int last_positive = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (uniform < cumulative) return last_positive;
  }
  if (last_positive < 0) throw std::invalid_argument("cannot sample from an all-zero row");
  return last_positive;
}

Trajectory sample_episode(const TabularMdp& mdp, const Policy& policy, Rng& rng) {
  Trajectory traj;
  traj.states.reserve(mdp.H + 1);
  traj.actions.reserve(mdp.H);
  traj.rewards.reserve(mdp.H);
  int s = mdp.initial_state;
  traj.states.push_back(s);
  for (int h = 0; h < mdp.H; ++h) {
    const int a = policy(h, s);
    traj.actions.push_back(a);
    traj.rewards.push_back(mdp.reward(h, s, a));
    s = sample_index(mdp.transition(h, s, a), uniform01(rng));
    traj.states.push_back(s);
  }
  return traj;
}

namespace {

struct Fnv1a {
  std::uint64_t state = 1469598103934665603ULL;
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= 1099511628211ULL;
    }
  }
  void integer(std::int64_t x) { bytes(&x, sizeof x); }
  void real(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bytes(&bits, sizeof bits);
  }
};

}  // namespace

std::uint64_t digest(const TabularMdp& mdp) {
  Fnv1a h;
  h.integer(mdp.S);
  h.integer(mdp.A);
  h.integer(mdp.H);
  h.integer(mdp.initial_state);
  for (const auto& p : mdp.transitions)
    for (Eigen::Index i = 0; i < p.size(); ++i) h.real(p.data()[i]);
  for (const auto& r : mdp.rewards)
    for (Eigen::Index i = 0; i < r.size(); ++i) h.real(r.data()[i]);
  return h.state;
}

}  // namespace ocevi
