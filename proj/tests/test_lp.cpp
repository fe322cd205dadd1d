#include <gtest/gtest.h>

#include "properties.hpp"
#include "zsposg/lp.hpp"
#include "zsposg/stage_game.hpp"

using namespace zsposg;
using namespace zsposg::testing;

TEST(LpSolve, SingleBound) {
  LpProblem P(1);
  P.objective[0] = 1.0;
  P.add_row(RowType::kLe, 1.0).coefs[0] = 1.0;
  LpResult r = lp_solve(P);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_NEAR(r.duals[0], 1.0, 1e-12);
}

TEST(LpSolve, InfeasibleAndUnbounded) {
  LpProblem P(1);
  P.objective[0] = 1.0;
  P.add_row(RowType::kGe, 2.0).coefs[0] = 1.0;
  EXPECT_EQ(lp_solve(P).status, LpStatus::kUnbounded);
  P.add_row(RowType::kLe, 1.0).coefs[0] = 1.0;
  EXPECT_EQ(lp_solve(P).status, LpStatus::kInfeasible);
}

TEST(LpSolve, DuplicateConstraintsTerminate) {
  LpProblem P(2);
  P.objective = {1.0, 1.0};
  for (int k = 0; k < 6; ++k) {
    auto& r = P.add_row(RowType::kLe, 1.0);
    r.coefs = {1.0, 1.0};
  }
  auto& e = P.add_row(RowType::kEq, 0.0);
  e.coefs = {1.0, -1.0};
  LpResult r = lp_solve(P);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_NEAR(r.x[0], 0.5, 1e-12);
}

TEST(LpSolve, FreeVariables) {
  // maximize -|x - 3| written as max t, t <= x - 3, t <= 3 - x, x free, t free.
  LpProblem P(2);
  P.objective[1] = 1.0;
  P.free_var = {true, true};
  auto& a = P.add_row(RowType::kLe, -3.0);
  a.coefs = {-1.0, 1.0};
  auto& b = P.add_row(RowType::kLe, 3.0);
  b.coefs = {1.0, 1.0};
  LpResult r = lp_solve(P);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
}

TEST(MatrixGame, TwoByTwoClosedForm) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mixed = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    MatrixGameSolution s = solve_matrix_game({{a, b}, {c, d}});
    const double lower = std::max(std::min(a, b), std::min(c, d));
    const double upper = std::min(std::max(a, c), std::max(b, d));
    if (lower >= upper - 1e-12) {
      EXPECT_NEAR(s.value, lower, 1e-9);  // saddle point
    } else {
      ++mixed;
      EXPECT_NEAR(s.value, (a * d - b * c) / (a + d - b - c), 1e-9);
    }
    double col0 = s.row_strategy[0] * a + s.row_strategy[1] * c;
    double col1 = s.row_strategy[0] * b + s.row_strategy[1] * d;
    EXPECT_GE(std::min(col0, col1), s.value - 1e-9);
  }
  EXPECT_GT(mixed, 0);
}

TEST(StageLp, StrongDualityOnRandomMatrices) {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) EXPECT_LE(duality_gap(random_stage_matrix(rng)), 1e-6) << "instance " << i;
}

TEST(StageLp, SingleHistoryTwoColumns) {
  StageGameMatrix M;
  M.num_actions = 1;
  M.histories = {0};
  M.marginal = {1.0};
  M.resize(1, 2);
  M.columns = {0, 1};
  M.at(0, 0) = 1.0;
  M.at(0, 1) = 3.0;
  EXPECT_NEAR(solve_primal(M).value, 1.0, 1e-12);
  StageSolution d = solve_dual(M);
  EXPECT_NEAR(d.value, 1.0, 1e-12);
  EXPECT_NEAR(d.delta[0], 1.0, 1e-12);
  EXPECT_NEAR(d.nu[0], 1.0, 1e-12);
}

TEST(StageLp, SingleColumnGivesArgmaxRows) {
  StageGameMatrix M;
  M.num_actions = 3;
  M.histories = {0, 1};
  M.marginal = {0.5, 0.5};
  M.resize(6, 1);
  const double v[6] = {0.1, 0.4, 0.2, -0.3, -0.1, -0.2};
  for (int r = 0; r < 6; ++r) M.at(r, 0) = v[r];
  StageSolution p = solve_primal(M);
  EXPECT_NEAR(p.value, 0.4 - 0.1, 1e-12);
  EXPECT_NEAR(p.rule.rows.at(0)[1], 1.0, 1e-12);
  EXPECT_NEAR(p.rule.rows.at(1)[1], 1.0, 1e-12);
  auto nu = compute_nu(M, {1.0});
  EXPECT_NEAR(nu[0], 0.8, 1e-12);
  EXPECT_NEAR(nu[1], -0.2, 1e-12);
}

TEST(StageLp, MatchingPenniesTerminalStage) {
  PosgModel m = load("matching_pennies.zsposg");
  auto s1 = transition(m, initial_occupancy(m), uniform_rule(m, 0, {0}), uniform_rule(m, 1, {0}));
  // Columns: the two pure guesses of player 2.
  StageGameMatrix M;
  M.tau = 1;
  M.num_actions = 2;
  M.histories = support(s1, 0);
  auto mc = decompose(s1, 0);
  for (Hist h : M.histories) M.marginal.push_back(mc.marginal.at(h));
  M.resize(4, 2);
  M.columns = {0, 1};
  for (std::size_t h = 0; h < M.histories.size(); ++h)
    for (int a = 0; a < 2; ++a)
      for (int g = 0; g < 2; ++g) {
        double v = 0.0;
        for (const auto& e : s1.entries)
          if (e.h1 == M.histories[h]) v += e.p * expected_state_reward(m, e.belief, a, g);
        M.at(static_cast<int>(h) * 2 + a, g) = v;
      }
  EXPECT_NEAR(solve_primal(M).value, 0.0, 1e-12);
  EXPECT_NEAR(solve_dual(M).value, 0.0, 1e-12);

  TerminalSolution t = solve_terminal_game(m, s1);
  EXPECT_NEAR(t.value, 0.0, 1e-12);
  // Player 2 cannot see the state, so every guess is worth 0.
  auto h2 = support(s1, 1);
  EXPECT_NEAR(expected_reward(m, s1, t.b1, uniform_rule(m, 1, h2)), 0.0, 1e-12);
  EXPECT_NEAR(expected_reward(m, s1, deterministic_rule(m, 0, support(s1, 0), 1), t.b2), 0.0, 1e-12);
}

TEST(TerminalGame, ConstantAndDecoupledRewards) {
  PosgModel c = constant_model(-1.5, 1);
  EXPECT_NEAR(solve_terminal_game(c, initial_occupancy(c)).value, -1.5, 1e-12);

  std::mt19937 rng(4);
  PosgModel m = random_model(rng, 2, 3, 2, 2, 2, 2);
  for (int s = 0; s < 2; ++s)
    for (int a1 = 0; a1 < 3; ++a1) m.reward[(s * 3 + a1) * 2 + 1] = m.reward[(s * 3 + a1) * 2];
  m.validate();
  auto sigma = random_occupancy(rng, m, 1);
  TerminalSolution t = solve_terminal_game(m, sigma);
  double best = 0.0;
  auto mc = decompose(sigma, 0);
  for (const auto& [h, row] : mc.conditional.rows) {
    double hb = -1e300;
    for (int a = 0; a < 3; ++a) {
      double v = 0.0;
      for (const auto& e : row) v += e.p * expected_state_reward(m, e.belief, a, 0);
      hb = std::max(hb, v);
    }
    best += mc.marginal.at(h) * hb;
  }
  EXPECT_NEAR(t.value, best, 1e-9);
}
