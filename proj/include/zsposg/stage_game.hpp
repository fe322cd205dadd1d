#pragma once

#include <iosfwd>
#include <vector>

#include "zsposg/lp.hpp"
#include "zsposg/occupancy.hpp"

namespace zsposg {

// Rows are (history, action) pairs of the maximizing player, columns are
// stored opponent tuples. Entries already carry the marginal weight.
struct StageGameMatrix {
  int tau = 0;
  int num_actions = 0;
  std::vector<Hist> histories;
  std::vector<double> marginal;
  std::vector<int> columns;
  std::vector<double> entries;

  int num_rows() const { return static_cast<int>(histories.size()) * num_actions; }
  int num_cols() const { return static_cast<int>(columns.size()); }
  double& at(int row, int col) { return entries[static_cast<std::size_t>(row) * columns.size() + col]; }
  double at(int row, int col) const { return entries[static_cast<std::size_t>(row) * columns.size() + col]; }
  void resize(int rows, int cols) {
    columns.resize(cols);
    entries.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  }
};

struct StageSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  DecisionRule rule;                // maximizer's rule (primal)
  std::vector<double> delta;        // distribution over columns
  std::vector<double> nu;           // per history: max_a (M delta) / marginal
};

// max_{beta} min_w beta' M_{.,w} with one simplex per history.
StageSolution solve_primal(const StageGameMatrix& M, int player = 0);
// min_{delta} sum_theta max_a (M delta)_{theta,a}; nu filled from the optimal delta.
StageSolution solve_dual(const StageGameMatrix& M);
// Per-history best-response values against a fixed column mixture.
std::vector<double> compute_nu(const StageGameMatrix& M, const std::vector<double>& delta);

struct TerminalSolution {
  DecisionRule b1;
  DecisionRule b2;
  double value = 0.0;
};

// Nash equilibrium of the last-stage Bayesian game max_b1 min_b2 r(sigma, b1, b2).
TerminalSolution solve_terminal_game(const PosgModel& m, const OccupancyState& sigma);

void write_matrix_csv(std::ostream& os, const StageGameMatrix& M);

}  // namespace zsposg
