#include <gtest/gtest.h>

#include "properties.hpp"
#include "zsposg/occupancy.hpp"

using namespace zsposg;
using namespace zsposg::testing;

TEST(Transition, PointMassWithDeterministicRules) {
  PosgModel m = load("mabc.zsposg", 2);
  OccupancyState s0 = initial_occupancy(m);
  auto b1 = deterministic_rule(m, 0, {0}, 0);
  auto b2 = deterministic_rule(m, 1, {0}, 1);
  OccupancyState s1 = transition(m, s0, b1, b2);
  double total = 0.0;
  for (const auto& e : s1.entries) {
    const Step st1 = last_step(m, 0, e.h1), st2 = last_step(m, 1, e.h2);
    EXPECT_EQ(st1.action, 0);
    EXPECT_EQ(st2.action, 1);
    double p = 0.0;
    for (int s2 = 0; s2 < m.num_states(); ++s2) p += m.p(3, 0, 1, s2, st1.obs, st2.obs);
    EXPECT_NEAR(e.p, p, 1e-12);
    total += e.p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Transition, MatchingPenniesBranches) {
  PosgModel m = load("matching_pennies.zsposg");
  const double p1 = 0.3;
  DecisionRule b1;
  b1.player = 0;
  b1.rows[0] = {p1, 1.0 - p1};
  auto b2 = uniform_rule(m, 1, {0});
  OccupancyState s1 = transition(m, initial_occupancy(m), b1, b2);
  double heads = 0.0, tails = 0.0;
  for (const auto& e : s1.entries) {
    if (last_step(m, 0, e.h1).action == 0) {
      heads += e.p;
      EXPECT_DOUBLE_EQ(e.belief[1], 1.0);
    } else {
      tails += e.p;
      EXPECT_DOUBLE_EQ(e.belief[2], 1.0);
    }
  }
  EXPECT_NEAR(heads, p1, 1e-12);
  EXPECT_NEAR(tails, 1.0 - p1, 1e-12);
}

TEST(Transition, MissingRuleThrows) {
  PosgModel m = load("mabc.zsposg", 2);
  DecisionRule empty;
  EXPECT_THROW(transition(m, initial_occupancy(m), empty, uniform_rule(m, 1, {0})), MissingRuleError);
}

TEST(TransitionProperties, OneLipschitz) {
  std::mt19937 rng(11);
  EXPECT_LE(lipschitz_violation(rng, 100), 1e-9);
}

TEST(TransitionProperties, LinearInSigmaAndRules) {
  std::mt19937 rng(12);
  EXPECT_LE(linearity_error(rng, 100), 1e-9);
}

TEST(TransitionProperties, ConditionalIgnoresOwnRuleAndMarginal) {
  std::mt19937 rng(13);
  EXPECT_LE(conditional_independence_error(rng, 100), 1e-9);
}

TEST(TransitionProperties, MatchesPathEnumeration) {
  std::mt19937 rng(14);
  EXPECT_LE(markov_sufficiency_error(rng, 100), 1e-9);
}

TEST(ExpectedReward, ConstantAndLinear) {
  PosgModel c = constant_model(0.7, 2);
  auto s = initial_occupancy(c);
  EXPECT_DOUBLE_EQ(expected_reward(c, s, uniform_rule(c, 0, {0}), uniform_rule(c, 1, {0})), 0.7);

  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    PosgModel m = random_small_model(rng, 3);
    auto sigma = random_occupancy(rng, m, 1 + i % 2);
    auto hs1 = support(sigma, 0), hs2 = support(sigma, 1);
    auto b1 = random_rule(rng, m, 0, hs1), c1 = random_rule(rng, m, 0, hs1);
    auto b2 = random_rule(rng, m, 1, hs2);
    const double mixed = expected_reward(m, sigma, mix_rules(b1, c1, 0.25), b2);
    EXPECT_NEAR(mixed, 0.25 * expected_reward(m, sigma, b1, b2) + 0.75 * expected_reward(m, sigma, c1, b2), 1e-12);
  }
}

TEST(ExpectedReward, MatchingPenniesFirstStageIsZero) {
  PosgModel m = load("matching_pennies.zsposg");
  std::mt19937 rng(1);
  for (int i = 0; i < 5; ++i)
    EXPECT_DOUBLE_EQ(expected_reward(m, initial_occupancy(m), random_rule(rng, m, 0, {0}), random_rule(rng, m, 1, {0})),
                     0.0);
}

TEST(Decompose, RecomposeIsIdentity) {
  std::mt19937 rng(21);
  for (int i = 0; i < 50; ++i) {
    PosgModel m = random_small_model(rng, 3);
    auto sigma = random_occupancy(rng, m, i % 3);
    for (int p = 0; p < 2; ++p) {
      auto mc = decompose(sigma, p);
      double total = 0.0;
      for (const auto& [h, w] : mc.marginal) total += w;
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_LE(max_abs_diff(joint_vector(recompose(mc)), joint_vector(sigma)), 1e-12);
    }
  }
}

TEST(Decompose, ProductOccupancyHasEqualRows) {
  PosgModel m = load("mabc.zsposg", 2);
  OccupancyState s;
  s.tau = 1;
  const std::vector<double> mu1 = {0.2, 0.8}, mu2 = {0.6, 0.4};
  for (Hist h1 = 0; h1 < 2; ++h1)
    for (Hist h2 = 0; h2 < 2; ++h2) s.entries.push_back({h1, h2, mu1[h1] * mu2[h2], {0, 0, 0, 1}});
  auto mc = decompose(s, 0);
  for (const auto& [h, row] : mc.conditional.rows) {
    ASSERT_EQ(row.size(), 2u);
    EXPECT_NEAR(row[0].p, 0.6, 1e-12);
    EXPECT_NEAR(row[1].p, 0.4, 1e-12);
  }
  auto point = decompose(initial_occupancy(m), 1);
  EXPECT_DOUBLE_EQ(point.marginal.at(0), 1.0);
  EXPECT_DOUBLE_EQ(point.conditional.rows.at(0).at(0).p, 1.0);
}

TEST(TransitionMarginal, MatchesDecomposition) {
  std::mt19937 rng(31);
  for (int i = 0; i < 50; ++i) {
    PosgModel m = random_small_model(rng, 3);
    auto sigma = random_occupancy(rng, m, i % 2);
    auto b1 = random_rule(rng, m, 0, support(sigma, 0));
    auto b2 = random_rule(rng, m, 1, support(sigma, 1));
    auto next = transition(m, sigma, b1, b2);
    for (int p = 0; p < 2; ++p) {
      auto expected = decompose(next, p).marginal;
      auto got = transition_marginal(m, sigma, b1, b2, p);
      for (const auto& [h, w] : expected) EXPECT_NEAR(got[h], w, 1e-12);
      for (const auto& [h, w] : got)
        if (!expected.count(h)) EXPECT_NEAR(w, 0.0, 1e-12);
    }
  }
}

TEST(TransitionConditional, BlindTwoStateClosedForm) {
  // Two states, blind observations, the state flips when player 2 plays 1.
  PosgModel m;
  m.state_names = {"l", "r"};
  m.action_names[0] = {"x", "y"};
  m.action_names[1] = {"keep", "flip"};
  m.obs_names[0] = {"o"};
  m.obs_names[1] = {"o"};
  m.horizon = 2;
  m.b0 = {0.3, 0.7};
  m.trans.assign(2 * 2 * 2 * 2, 0.0);
  m.reward.assign(8, 0.0);
  for (int s = 0; s < 2; ++s)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2) m.trans[m.trans_index(s, a1, a2, a2 ? 1 - s : s, 0, 0)] = 1.0;
  m.validate();
  const double q = 0.25;  // Pr(flip)
  DecisionRule b2;
  b2.player = 1;
  b2.rows[0] = {1.0 - q, q};
  auto c = transition_conditional(m, decompose(initial_occupancy(m), 0).conditional, b2);
  for (int a1 = 0; a1 < 2; ++a1) {
    const CondRow& row = c.rows.at(extend(m, 0, 0, a1, 0));
    ASSERT_EQ(row.size(), 2u);
    EXPECT_NEAR(row[0].p, 1.0 - q, 1e-12);
    EXPECT_NEAR(row[1].p, q, 1e-12);
    EXPECT_NEAR(row[0].belief[0], 0.3, 1e-12);
    EXPECT_NEAR(row[1].belief[0], 0.7, 1e-12);
  }
}

TEST(Distance, BasicCases) {
  std::mt19937 rng(41);
  PosgModel m = random_small_model(rng, 3);
  auto a = random_occupancy(rng, m, 2), b = random_occupancy(rng, m, 2);
  EXPECT_DOUBLE_EQ(distance_l1(a, a), 0.0);
  double naive = 0.0;
  for (const auto& e : a.entries) {
    const OccEntry* f = b.find(e.h1, e.h2);
    naive += std::abs(e.p - (f ? f->p : 0.0));
  }
  for (const auto& e : b.entries)
    if (!a.find(e.h1, e.h2)) naive += e.p;
  EXPECT_NEAR(distance_l1(a, b), naive, 1e-12);

  OccupancyState x, y;
  x.tau = y.tau = 1;
  x.entries.push_back({0, 0, 1.0, {1.0}});
  y.entries.push_back({1, 0, 1.0, {1.0}});
  EXPECT_DOUBLE_EQ(distance_l1(x, y), 2.0);
  y.tau = 2;
  EXPECT_THROW(distance_l1(x, y), std::invalid_argument);
}

TEST(SwapOccupancy, IsAnInvolution) {
  std::mt19937 rng(51);
  PosgModel m = random_small_model(rng, 3);
  auto a = random_occupancy(rng, m, 2);
  EXPECT_LE(max_abs_diff(joint_vector(swap_occupancy(swap_occupancy(a))), joint_vector(a)), 0.0);
  auto w = swap_occupancy(a);
  for (const auto& e : a.entries) EXPECT_NE(w.find(e.h2, e.h1), nullptr);
}
