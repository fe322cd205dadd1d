#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zsposg/bounds.hpp"

namespace zsposg {

struct TraceRecord {
  long iteration = 0;
  double elapsed_ms = 0.0;
  double ub0 = 0.0;
  double lb0 = 0.0;
  double gap = 0.0;
  int trajectory_length = 0;
  std::vector<int> bag_v_sizes;
  std::vector<int> bag_w_sizes;
};

enum class SolveStatus { kConverged, kBudgetExhausted };
std::string to_string(SolveStatus s);

struct SolverConfig {
  double epsilon = 0.01;
  std::optional<double> rho;  // empty: automatic
  LipschitzMode lipschitz = LipschitzMode::kTheorem;
  Heuristic heuristic = Heuristic::kBmdp;
  double max_seconds = 24.0 * 3600.0;
  long max_iterations = 1000000;
  int prune_period = 50;
  // Stop as soon as the root gap is at most this (defaults to epsilon).
  std::optional<double> target_gap;
  std::function<void(const TraceRecord&)> on_iteration;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kBudgetExhausted;
  std::string variant = "cc";
  double ub = 0.0;
  double lb = 0.0;
  double gap = 0.0;
  long iterations = 0;
  double rho = 0.0;
  double elapsed_ms = 0.0;
  std::vector<TraceRecord> trace;
  // Root V tuple of the upper bound (player 2's strategy) and of the
  // swapped lower bound (player 1's strategy).
  int upper_root = -1;
  int lower_root = -1;
};

// Gap threshold at depth tau: gamma^-tau eps - sum_{i=1..tau} 2 rho lambda_{tau-i} gamma^-i.
double thr(double epsilon, double rho, const LipschitzSchedule& schedule, int tau);
// Supremum of admissible rho from the closed forms: gamma=1 gives
// eps / (dr (H+1) H), gamma<1 gives (1-gamma) eps / (2 lambda_inf).
double rho_max(double epsilon, double gamma, double lambda_inf, double delta_r, int horizon);
double rho_max(double epsilon, const LipschitzSchedule& schedule);
// Largest rho keeping every thr(tau) positive for this exact schedule.
double rho_supremum(double epsilon, const LipschitzSchedule& schedule);
double auto_rho(double epsilon, const LipschitzSchedule& schedule);
// Trajectory length bound for discounted problems; H when gamma == 1.
int t_max(double epsilon, double rho, double lambda_inf, double W, double gamma, int horizon = 0);

class HsviSolver {
 public:
  HsviSolver(const PosgModel& model, SolverConfig config);

  SolveResult solve();
  // Runs one trajectory from the root and returns its length.
  int iterate();

  BoundSet& bounds() { return bounds_; }
  const BoundSet& bounds() const { return bounds_; }
  const PosgModel& model() const { return model_; }
  double rho() const { return rho_; }
  double threshold(int tau) const { return thr(config_.epsilon, rho_, bounds_.upper().schedule(), tau); }

 private:
  struct Context {
    Conditional upper_cond;  // player-1 conditional of sigma_{tau-1}
    Conditional lower_cond;  // player-2 conditional of sigma_{tau-1}
    DecisionRule b1;         // upper-bound greedy rule of player 1
    DecisionRule b2;         // lower-bound greedy rule of player 2
  };
  int explore(const OccupancyState& sigma, const Context* ctx);
  void update(const OccupancyState& sigma, const Context* ctx);

  PosgModel model_;
  SolverConfig config_;
  BoundSet bounds_;
  double rho_ = 0.0;
  OccupancyState root_;
};

}  // namespace zsposg
