#pragma once

#include "ocevi/mdp.hpp"

namespace ocevi::testing {

// H = 2. From the start state, "risky" reaches good/bad with probability 1/2 each and
// "safe" reaches mid. Step-2 rewards: good 1, mid 0.4, bad 0.
inline TabularMdp risky_vs_safe() {
  TabularMdp mdp = TabularMdp::zeros(4, 2, 2);
  enum { start, good, bad, mid };
  mdp.state_names = {"start", "good", "bad", "mid"};
  mdp.action_names = {"risky", "safe"};
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 4; ++s)
      for (int a = 0; a < 2; ++a) mdp.transition(h, s, a)[s] = 1.0;
  mdp.transition(0, start, 0) << 0.0, 0.5, 0.5, 0.0;
  mdp.transition(0, start, 1) << 0.0, 0.0, 0.0, 1.0;
  for (int a = 0; a < 2; ++a) {
    mdp.rewards[1](good, a) = 1.0;
    mdp.rewards[1](mid, a) = 0.4;
  }
  return mdp;
}

}  // namespace ocevi::testing
