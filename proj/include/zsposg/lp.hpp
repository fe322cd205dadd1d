#pragma once

#include <string>
#include <vector>

namespace zsposg {

enum class RowType { kLe, kEq, kGe };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus s);

// maximize c·x  s.t.  rows, x >= 0 unless marked free.
struct LpProblem {
  struct Row {
    std::vector<double> coefs;  // dense, size num_vars
    RowType type = RowType::kLe;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<bool> free_var;
  std::vector<Row> rows;

  explicit LpProblem(int n = 0) : num_vars(n), objective(n, 0.0), free_var(n, false) {}
  Row& add_row(RowType type, double rhs);
};

// duals follow the maximization convention: y >= 0 on <= rows, y <= 0 on >= rows,
// so that objective == b·y at optimality.
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  int iterations = 0;
};

LpResult lp_solve(const LpProblem& problem);

// Zero-sum normal-form game, row player maximizes x'Ay.
struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

MatrixGameSolution solve_matrix_game(const std::vector<std::vector<double>>& A);

}  // namespace zsposg
