#include "zsposg/stage_game.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace zsposg {

StageSolution solve_primal(const StageGameMatrix& M, int player) {
  const int R = M.num_rows(), W = M.num_cols(), A = M.num_actions;
  const int H = static_cast<int>(M.histories.size());
  if (R == 0 || W == 0) throw std::invalid_argument("solve_primal: empty matrix");
  LpProblem P(R + 1);
  P.objective[R] = 1.0;
  P.free_var[R] = true;
  for (int w = 0; w < W; ++w) {
    auto& row = P.add_row(RowType::kLe, 0.0);
    for (int r = 0; r < R; ++r) row.coefs[r] = -M.at(r, w);
    row.coefs[R] = 1.0;
  }
  for (int h = 0; h < H; ++h) {
    auto& row = P.add_row(RowType::kEq, 1.0);
    for (int a = 0; a < A; ++a) row.coefs[h * A + a] = 1.0;
  }
  LpResult res = lp_solve(P);
  StageSolution out;
  out.status = res.status;
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("primal stage LP: " + to_string(res.status));
  out.value = res.objective;
  out.rule.player = player;
  for (int h = 0; h < H; ++h) {
    std::vector<double> row(A);
    double s = 0.0;
    for (int a = 0; a < A; ++a) s += row[a] = std::max(0.0, res.x[h * A + a]);
    for (double& v : row) v /= s;
    out.rule.rows[M.histories[h]] = row;
  }
  out.delta.assign(W, 0.0);
  double s = 0.0;
  for (int w = 0; w < W; ++w) s += out.delta[w] = std::max(0.0, res.duals[w]);
  for (double& d : out.delta) d /= s;
  return out;
}

std::vector<double> compute_nu(const StageGameMatrix& M, const std::vector<double>& delta) {
  const int W = M.num_cols(), A = M.num_actions;
  const int H = static_cast<int>(M.histories.size());
  std::vector<double> nu(H);
  for (int h = 0; h < H; ++h) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a) {
      double v = 0.0;
      for (int w = 0; w < W; ++w) v += M.at(h * A + a, w) * delta[w];
      if (v > best) best = v;
    }
    nu[h] = best / M.marginal[h];
  }
  return nu;
}

StageSolution solve_dual(const StageGameMatrix& M) {
  const int R = M.num_rows(), W = M.num_cols(), A = M.num_actions;
  const int H = static_cast<int>(M.histories.size());
  if (R == 0 || W == 0) throw std::invalid_argument("solve_dual: empty matrix");
  // Variables: delta_w (W), u_theta free (H). maximize -sum u.
  LpProblem P(W + H);
  for (int h = 0; h < H; ++h) {
    P.objective[W + h] = -1.0;
    P.free_var[W + h] = true;
  }
  for (int h = 0; h < H; ++h)
    for (int a = 0; a < A; ++a) {
      auto& row = P.add_row(RowType::kLe, 0.0);
      for (int w = 0; w < W; ++w) row.coefs[w] = M.at(h * A + a, w);
      row.coefs[W + h] = -1.0;
    }
  auto& simplex = P.add_row(RowType::kEq, 1.0);
  for (int w = 0; w < W; ++w) simplex.coefs[w] = 1.0;
  LpResult res = lp_solve(P);
  StageSolution out;
  out.status = res.status;
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("dual stage LP: " + to_string(res.status));
  out.value = -res.objective;
  out.delta.assign(W, 0.0);
  double s = 0.0;
  for (int w = 0; w < W; ++w) s += out.delta[w] = std::max(0.0, res.x[w]);
  for (double& d : out.delta) d /= s;
  out.nu = compute_nu(M, out.delta);
  out.rule.player = 0;
  for (int h = 0; h < H; ++h) {
    std::vector<double> row(A, 0.0);
    double t = 0.0;
    for (int a = 0; a < A; ++a) t += row[a] = std::max(0.0, -res.duals[h * A + a]);
    for (double& v : row) v = t > 0.0 ? v / t : 1.0 / A;
    out.rule.rows[M.histories[h]] = row;
  }
  return out;
}

TerminalSolution solve_terminal_game(const PosgModel& m, const OccupancyState& sigma) {
  const int A1 = m.num_actions(0), A2 = m.num_actions(1);
  auto hs1 = support(sigma, 0);
  auto hs2 = support(sigma, 1);
  std::map<Hist, int> idx1, idx2;
  for (std::size_t i = 0; i < hs1.size(); ++i) idx1[hs1[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < hs2.size(); ++i) idx2[hs2[i]] = static_cast<int>(i);
  const int n1 = static_cast<int>(hs1.size()) * A1;
  const int n2 = static_cast<int>(hs2.size());
  // Variables: beta1 (n1), u per theta2 (free). One <= row per (theta2, a2).
  LpProblem P(n1 + n2);
  for (int j = 0; j < n2; ++j) {
    P.objective[n1 + j] = 1.0;
    P.free_var[n1 + j] = true;
  }
  for (int j = 0; j < n2; ++j)
    for (int a2 = 0; a2 < A2; ++a2) {
      auto& row = P.add_row(RowType::kLe, 0.0);
      row.coefs[n1 + j] = 1.0;
    }
  for (const auto& e : sigma.entries) {
    const int i1 = idx1[e.h1], i2 = idx2[e.h2];
    for (int a1 = 0; a1 < A1; ++a1)
      for (int a2 = 0; a2 < A2; ++a2)
        P.rows[i2 * A2 + a2].coefs[i1 * A1 + a1] -= e.p * expected_state_reward(m, e.belief, a1, a2);
  }
  for (std::size_t i = 0; i < hs1.size(); ++i) {
    auto& row = P.add_row(RowType::kEq, 1.0);
    for (int a1 = 0; a1 < A1; ++a1) row.coefs[i * A1 + a1] = 1.0;
  }
  LpResult res = lp_solve(P);
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("terminal game LP: " + to_string(res.status));
  TerminalSolution out;
  out.value = res.objective;
  out.b1.player = 0;
  out.b2.player = 1;
  for (std::size_t i = 0; i < hs1.size(); ++i) {
    std::vector<double> row(A1);
    double s = 0.0;
    for (int a = 0; a < A1; ++a) s += row[a] = std::max(0.0, res.x[i * A1 + a]);
    for (double& v : row) v /= s;
    out.b1.rows[hs1[i]] = row;
  }
  for (int j = 0; j < n2; ++j) {
    std::vector<double> row(A2);
    double s = 0.0;
    for (int a = 0; a < A2; ++a) s += row[a] = std::max(0.0, res.duals[j * A2 + a]);
    for (double& v : row) v = s > 0.0 ? v / s : 1.0 / A2;
    out.b2.rows[hs2[j]] = row;
  }
  return out;
}

void write_matrix_csv(std::ostream& os, const StageGameMatrix& M) {
  os << "row,column,entry\n";
  const int A = M.num_actions;
  for (int r = 0; r < M.num_rows(); ++r)
    for (int c = 0; c < M.num_cols(); ++c)
      os << M.histories[r / A] << ':' << r % A << ',' << M.columns[c] << ',' << M.at(r, c) << '\n';
}

}  // namespace zsposg
