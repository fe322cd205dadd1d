#include "zsposg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zsposg {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr double kCostEps = 1e-9;

// Dense tableau. The last row holds reduced costs z_j = c_B B^-1 A_j - c_j,
// the last column holds the right-hand side.
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), t_(static_cast<std::size_t>(m + 1) * (n + 1), 0.0), basis_(m, -1) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  double& z(int j) { return at(m_, j); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const int w = n_ + 1;
    double* pr = &t_[static_cast<std::size_t>(r) * w];
    const double inv = 1.0 / pr[c];
    for (int j = 0; j < w; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = &t_[static_cast<std::size_t>(i) * w];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (int j = 0; j < w; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Runs the simplex on the current z-row. Columns with allowed[j]==false never enter.
  LpStatus optimize(const std::vector<bool>& allowed, int& iterations, int max_iterations) {
    int degenerate_streak = 0;
    while (true) {
      if (iterations >= max_iterations) return LpStatus::kIterationLimit;
      const bool bland = degenerate_streak > 50;
      int enter = -1;
      double best = -kCostEps;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        const double zj = z(j);
        if (zj < -kCostEps) {
          if (bland) {
            enter = j;
            break;
          }
          if (zj < best) {
            best = zj;
            enter = j;
          }
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a <= kPivotEps) continue;
          const double q = std::max(0.0, rhs(i)) / a;
          if (leave < 0 || q < ratio - 1e-12 || (q <= ratio + 1e-12 && basis_[i] < basis_[leave])) {
            if (leave < 0 || q < ratio - 1e-12) ratio = q;
            leave = i;
          }
        }
      } else {
        // Harris: bound the step with a small feasibility tolerance, then
        // take the largest pivot among rows within that bound.
        double bound = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a > kPivotEps) bound = std::min(bound, (std::max(0.0, rhs(i)) + kFeasTol) / a);
        }
        double biggest = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a <= kPivotEps) continue;
          const double q = std::max(0.0, rhs(i)) / a;
          if (q <= bound && a > biggest) {
            biggest = a;
            leave = i;
            ratio = q;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      degenerate_streak = ratio <= 1e-12 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

LpProblem::Row& LpProblem::add_row(RowType type, double rhs) {
  rows.push_back({std::vector<double>(num_vars, 0.0), type, rhs});
  return rows.back();
}

LpResult lp_solve(const LpProblem& P) {
  const int m = static_cast<int>(P.rows.size());
  // Column layout: structural (free vars split in two), one slack/surplus per
  // inequality row, one artificial per row lacking a slack basis.
  std::vector<int> pos_col(P.num_vars), neg_col(P.num_vars, -1);
  int n = 0;
  for (int j = 0; j < P.num_vars; ++j) {
    pos_col[j] = n++;
    if (P.free_var[j]) neg_col[j] = n++;
  }
  std::vector<double> sign(m, 1.0);
  std::vector<RowType> type(m);
  std::vector<int> slack_col(m, -1), art_col(m, -1), unit_col(m, -1);
  for (int i = 0; i < m; ++i) {
    type[i] = P.rows[i].type;
    if (P.rows[i].rhs < 0.0 || (P.rows[i].rhs == 0.0 && type[i] == RowType::kGe)) {
      sign[i] = -1.0;
      if (type[i] == RowType::kLe)
        type[i] = RowType::kGe;
      else if (type[i] == RowType::kGe)
        type[i] = RowType::kLe;
    }
    if (type[i] != RowType::kEq) slack_col[i] = n++;
  }
  const int n_no_art = n;
  for (int i = 0; i < m; ++i)
    if (type[i] != RowType::kLe) art_col[i] = n++;
  for (int i = 0; i < m; ++i) unit_col[i] = type[i] == RowType::kLe ? slack_col[i] : art_col[i];

  Tableau T(m, n);
  for (int i = 0; i < m; ++i) {
    const auto& row = P.rows[i];
    for (int j = 0; j < P.num_vars; ++j) {
      const double a = sign[i] * row.coefs[j];
      T.at(i, pos_col[j]) = a;
      if (neg_col[j] >= 0) T.at(i, neg_col[j]) = -a;
    }
    if (slack_col[i] >= 0) T.at(i, slack_col[i]) = type[i] == RowType::kLe ? 1.0 : -1.0;
    if (art_col[i] >= 0) T.at(i, art_col[i]) = 1.0;
    T.rhs(i) = sign[i] * row.rhs;
    T.basis()[i] = unit_col[i];
  }

  LpResult res;
  const int max_it = 200000 + 50 * (m + n);
  std::vector<bool> allowed(n, true);

  // Phase 1: maximize -sum(artificials).
  bool has_art = false;
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) {
      has_art = true;
      for (int j = 0; j <= n; ++j) T.at(m, j) -= T.at(i, j);
      T.z(art_col[i]) = 0.0;
    }
  if (has_art) {
    LpStatus st = T.optimize(allowed, res.iterations, max_it);
    if (st == LpStatus::kIterationLimit) {
      res.status = st;
      return res;
    }
    if (T.at(m, n) < -1e-7) {
      res.status = LpStatus::kInfeasible;
      return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (T.basis()[i] < n_no_art) continue;
      int best = -1;
      for (int j = 0; j < n_no_art; ++j)
        if (std::abs(T.at(i, j)) > 1e-7 && (best < 0 || std::abs(T.at(i, j)) > std::abs(T.at(i, best)))) best = j;
      if (best >= 0) T.pivot(i, best);
    }
    for (int j = n_no_art; j < n; ++j) allowed[j] = false;
  }

  // Phase 2 objective row.
  std::vector<double> cost(n, 0.0);
  for (int j = 0; j < P.num_vars; ++j) {
    cost[pos_col[j]] = P.objective[j];
    if (neg_col[j] >= 0) cost[neg_col[j]] = -P.objective[j];
  }
  for (int j = 0; j <= n; ++j) {
    double zj = j < n ? -cost[j] : 0.0;
    for (int i = 0; i < m; ++i) {
      const int b = T.basis()[i];
      if (cost[b] != 0.0) zj += cost[b] * T.at(i, j);
    }
    T.z(j) = zj;
  }
  res.status = T.optimize(allowed, res.iterations, max_it);
  if (res.status != LpStatus::kOptimal) return res;

  std::vector<double> val(n, 0.0);
  for (int i = 0; i < m; ++i) val[T.basis()[i]] = T.rhs(i);
  res.x.assign(P.num_vars, 0.0);
  for (int j = 0; j < P.num_vars; ++j) {
    res.x[j] = val[pos_col[j]];
    if (neg_col[j] >= 0) res.x[j] -= val[neg_col[j]];
  }
  res.objective = 0.0;
  for (int j = 0; j < P.num_vars; ++j) res.objective += P.objective[j] * res.x[j];
  res.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) res.duals[i] = sign[i] * T.z(unit_col[i]);
  return res;
}

MatrixGameSolution solve_matrix_game(const std::vector<std::vector<double>>& A) {
  const int R = static_cast<int>(A.size());
  if (R == 0) throw std::invalid_argument("empty matrix game");
  const int C = static_cast<int>(A[0].size());
  // Variables: x_0..x_{R-1}, v (free). Rows: v - x'A_c <= 0 per column, sum x = 1.
  LpProblem P(R + 1);
  P.objective[R] = 1.0;
  P.free_var[R] = true;
  for (int c = 0; c < C; ++c) {
    auto& row = P.add_row(RowType::kLe, 0.0);
    for (int r = 0; r < R; ++r) row.coefs[r] = -A[r][c];
    row.coefs[R] = 1.0;
  }
  auto& simplex = P.add_row(RowType::kEq, 1.0);
  for (int r = 0; r < R; ++r) simplex.coefs[r] = 1.0;
  LpResult res = lp_solve(P);
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("matrix game LP: " + to_string(res.status));
  MatrixGameSolution out;
  out.value = res.objective;
  out.row_strategy.assign(res.x.begin(), res.x.begin() + R);
  out.col_strategy.assign(C, 0.0);
  double s = 0.0;
  for (int c = 0; c < C; ++c) s += out.col_strategy[c] = std::max(0.0, res.duals[c]);
  for (double& y : out.col_strategy) y /= s;
  return out;
}

}  // namespace zsposg
