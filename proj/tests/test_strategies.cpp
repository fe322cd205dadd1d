#include <gtest/gtest.h>

#include "test_util.hpp"
#include "zsposg/hsvi.hpp"
#include "zsposg/sequence_form.hpp"
#include "zsposg/strategies.hpp"

using namespace zsposg;
using namespace zsposg::testing;

TEST(Evaluate, ConstantGame) {
  PosgModel m = constant_model(0.25, 4);
  EXPECT_NEAR(evaluate_profile(m, uniform_strategy(m, 0), uniform_strategy(m, 1)), 1.0, 1e-12);
  PosgModel d = constant_model(1.0, 3, 0.5);
  EXPECT_NEAR(evaluate_profile(d, uniform_strategy(d, 0), uniform_strategy(d, 1)), 1.75, 1e-12);
}

TEST(Evaluate, MatchingPenniesUniformIsZero) {
  PosgModel m = load("matching_pennies.zsposg");
  EXPECT_NEAR(evaluate_profile(m, uniform_strategy(m, 0), uniform_strategy(m, 1)), 0.0, 1e-12);
}

TEST(Evaluate, MissingRowThrows) {
  PosgModel m = load("matching_pennies.zsposg");
  BehavioralStrategy b1 = uniform_strategy(m, 0);
  b1.rules[1].rows.clear();
  EXPECT_THROW(evaluate_profile(m, b1, uniform_strategy(m, 1)), MissingRuleError);
}

TEST(BestResponse, DominatesRandomStrategies) {
  std::mt19937 rng(31);
  for (int i = 0; i < 10; ++i) {
    PosgModel m = random_small_model(rng, 2);
    BehavioralStrategy b1 = random_strategy(rng, m, 0), b2 = random_strategy(rng, m, 1);
    const double v = evaluate_profile(m, b1, b2);
    BestResponse up = best_response(m, b2, 0);
    BestResponse down = best_response(m, b1, 1);
    EXPECT_GE(up.value, v - 1e-12);
    EXPECT_LE(down.value, v + 1e-12);
    EXPECT_NEAR(evaluate_profile(m, up.strategy, b2), up.value, 1e-9);
    EXPECT_NEAR(evaluate_profile(m, b1, down.strategy), down.value, 1e-9);
  }
}

TEST(BestResponse, EquilibriumIsUnexploitable) {
  PosgModel m = load("adv_tiger.zsposg", 2);
  ExactSolution e = solve_exact(m, 2);
  EXPECT_NEAR(exploitability(m, e.b1, 0, e.value), 0.0, 1e-6);
  EXPECT_NEAR(exploitability(m, e.b2, 1, e.value), 0.0, 1e-6);
}

TEST(Extraction, SolverStrategiesAreConsistent) {
  for (const char* name : {"matching_pennies.zsposg", "mabc.zsposg", "recycling_robot.zsposg"}) {
    PosgModel m = load(name, 2);
    HsviSolver solver(m, {});
    SolveResult r = solver.solve();
    ASSERT_EQ(r.status, SolveStatus::kConverged) << name;
    RecursiveStrategy s2{&solver.bounds().upper(), r.upper_root, 1};
    RecursiveStrategy s1{&solver.bounds().lower(), r.lower_root, 0};
    Extraction e2 = extract_behavioral(s2), e1 = extract_behavioral(s1);
    EXPECT_LE(realization_consistency_error(m, e2.weights, 1), 1e-9) << name;
    EXPECT_LE(realization_consistency_error(m, e1.weights, 0), 1e-9) << name;
    EXPECT_LE(best_response(m, e2.strategy, 0).value, r.ub + 1e-6) << name;
    EXPECT_GE(best_response(m, e1.strategy, 1).value, r.lb - 1e-6) << name;
    std::mt19937 rng(5);
    for (int i = 0; i < 5; ++i) {
      BehavioralStrategy o1 = random_strategy(rng, m, 0), o2 = random_strategy(rng, m, 1);
      EXPECT_NEAR(evaluate_recursive(m, s2, o1), evaluate_profile(m, o1, e2.strategy), 1e-9) << name;
      EXPECT_NEAR(evaluate_recursive(m, s1, o2), evaluate_profile(m, e1.strategy, o2), 1e-9) << name;
    }
  }
}

TEST(Swap, StrategyRoundTrip) {
  std::mt19937 rng(4);
  PosgModel m = random_small_model(rng, 2);
  BehavioralStrategy b = random_strategy(rng, m, 1);
  BehavioralStrategy s = swap_strategy(swap_strategy(b));
  EXPECT_EQ(s.player, 1);
  EXPECT_EQ(s.rules[1].rows, b.rules[1].rows);
}
