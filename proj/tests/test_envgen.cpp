#include <doctest.h>

#include <cmath>

#include "ocevi/envgen.hpp"
#include "ocevi/planner.hpp"
#include "oracles.hpp"

using namespace ocevi;
using U = Utility<double>;

namespace {

HardInstanceParams small_params() {
  HardInstanceParams p;
  p.A = 2;
  p.d = 2;
  p.H = 12;
  p.c1 = 4;
  p.c2 = 3;
  p.K = 2000;
  return p;
}

}  // namespace

TEST_CASE("random MDPs are valid and reproducible") {
  Rng a(17), b(17);
  const TabularMdp m1 = random_mdp(6, 3, 3, a);
  const TabularMdp m2 = random_mdp(6, 3, 3, b);
  CHECK(validate(m1).empty());
  CHECK(digest(m1) == digest(m2));
  CHECK(m1.initial_state == 0);
  Rng c(18);
  CHECK(digest(random_mdp(6, 3, 3, c)) != digest(m1));
}

TEST_CASE("random rewards are zero about 85% of the time") {
  Rng rng(2024);
  const TabularMdp mdp = random_mdp(10, 10, 100, rng);
  long zeros = 0, total = 0;
  for (const auto& r : mdp.rewards) {
    zeros += (r.array() == 0.0).count();
    total += r.size();
  }
  REQUIRE(total == 10000);
  const double fraction = static_cast<double>(zeros) / total;
  CHECK(fraction >= 0.84);
  CHECK(fraction <= 0.86);
}

TEST_CASE("hard instance dimensions and constants") {
  const HardInstanceParams p = small_params();
  CHECK(p.states() == 6);
  CHECK(p.leaves() == 2);
  CHECK(p.p() == 0.5);
  CHECK(p.waiting_horizon() == 4);
  CHECK(hard_instance_epsilon(0.5, 4.0, 2, 2, 2, 100) ==
        doctest::Approx(0.25 * 0.875 * std::sqrt(0.08)).epsilon(1e-14));
  CHECK(hard_instance_epsilon(0.5, 4.0, 2, 2, 2, 100) == doctest::Approx(0.061872).epsilon(1e-5));

  const HardInstance inst = hard_instance(p);
  CHECK(validate(inst.mdp).empty());
  CHECK(inst.mdp.S == 6);
  CHECK(inst.meta.L == 2);
  CHECK(inst.meta.leaf_state(0) == 2);
  CHECK(inst.meta.leaf_state(1) == 3);
  CHECK(inst.mdp.state_names[1] == "root");
  for (int h = 0; h < p.H; ++h)
    for (int a = 0; a < p.A; ++a) {
      CHECK(inst.mdp.transition(h, 2, a).sum() == doctest::Approx(1.0));
      CHECK(inst.mdp.transition(h, 2, a)[inst.meta.good()] == 0.5);
    }
}

TEST_CASE("hard instance parameter checks name the constraint") {
  auto expect_reject = [](HardInstanceParams p, const std::string& fragment) {
    try {
      hard_instance(p);
      FAIL("accepted infeasible parameters");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  auto p = small_params();
  p.H = 11;
  expect_reject(p, "H >= 2*c2*d");
  p = small_params();
  p.K = 10;
  expect_reject(p, "K >= c1*H*S*A");
  p = small_params();
  p.c1 = 3;
  expect_reject(p, "c1 >= 4");
  p = small_params();
  p.c2 = 2;
  expect_reject(p, "c2 > 2");
  p = small_params();
  p.A = 1;
  expect_reject(p, "A >= 2");
  p = small_params();
  p.target = HardTarget{2, 0, 0};
  expect_reject(p, "target stage");
  p.target = HardTarget{3, 2, 0};
  expect_reject(p, "target leaf");
  p.target = HardTarget{3, 0, 2};
  expect_reject(p, "target action");
}

TEST_CASE("perturbed and base instances differ in exactly two entries") {
  auto p = small_params();
  const HardInstance base = hard_instance(p);
  p.target = HardTarget{5, 1, 0};
  const HardInstance perturbed = hard_instance(p);
  int differing = 0;
  for (int h = 0; h < p.H; ++h) {
    const RowMatrixXd diff = perturbed.mdp.transitions[h] - base.mdp.transitions[h];
    for (Eigen::Index i = 0; i < diff.size(); ++i) {
      if (diff.data()[i] != 0.0) {
        ++differing;
        CHECK(std::abs(diff.data()[i]) == doctest::Approx(perturbed.meta.epsilon));
        CHECK(h == 4);
      }
    }
  }
  CHECK(differing == 2);
}

TEST_CASE("closed-form optimal value of the hard instance") {
  auto p = small_params();
  const HardInstance base = hard_instance(p);
  const double payoff = p.H - base.meta.Hbar - p.d;
  CHECK(hard_instance_optimal_value(base.meta, p, U::mean()) ==
        doctest::Approx(0.5 * payoff).epsilon(1e-9));
  p.target = HardTarget{3, 0, 1};
  const HardInstance inst = hard_instance(p);
  CHECK(hard_instance_optimal_value(inst.meta, p, U::mean()) ==
        doctest::Approx((0.5 + inst.meta.epsilon) * payoff).epsilon(1e-9));
  for (const auto& u : ocevi::testing::table_utilities())
    CHECK(std::abs(hard_instance_optimal_value(inst.meta, p, u) -
                   optimal_plan(inst.mdp, u).values.V(0, 0)) <= 1e-7);
}

TEST_CASE("optimal policy waits, walks to the target leaf and plays the target action") {
  HardInstanceParams p;
  p.A = 3;
  p.d = 2;
  p.H = 14;
  p.c1 = 4;
  p.c2 = 3.5;
  p.K = 5000;
  for (const HardTarget target : {HardTarget{3, 2, 1}, HardTarget{6, 0, 2}, HardTarget{4, 1, 0}}) {
    p.target = target;
    const HardInstance inst = hard_instance(p);
    for (const auto& u : {U::mean(), U::entropic(-0.6), U::cvar(0.7), U::mean_variance(0.1)}) {
      const Plan plan = optimal_plan(inst.mdp, u);
      // Follow the greedy policy along the deterministic part of the dynamics.
      int s = inst.meta.waiting();
      int leave_stage = 0;
      for (int h = 0; h < p.H; ++h) {
        if (s == inst.meta.waiting()) {
          const int a = plan.policy(h, s);
          const bool stay = a == 0 && h + 1 <= inst.meta.Hbar;
          if (!stay) leave_stage = h + 1;
          s = stay ? s : inst.meta.root();
          continue;
        }
        if (s == inst.meta.leaf_state(target.leaf) && h + 1 == target.stage) {
          CHECK(plan.policy(h, s) == target.action);
          break;
        }
        REQUIRE(s != inst.meta.good());
        const auto row = inst.mdp.transition(h, s, plan.policy(h, s));
        Eigen::Index next = 0;
        REQUIRE(row.maxCoeff(&next) == 1.0);
        s = static_cast<int>(next);
      }
      CHECK(leave_stage == target.stage - p.d);
    }
  }
}
