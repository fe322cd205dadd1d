#pragma once

#include <vector>

#include "zsposg/bounds.hpp"
#include "zsposg/doo.hpp"
#include "zsposg/hsvi.hpp"

namespace zsposg {

struct Cone {
  int id = -1;
  int tau = 0;
  OccupancyState anchor;
  double summit = 0.0;
  DecisionRule rule;    // opponent (index 1) rule attached at the anchor
  int successor = -1;   // cone id at tau+1, -1 for the initial bound
};

// Upper bound of a game where player 1 maximizes, as the min of a linear
// initial bound and downward L1 cones.
class ConeBound {
 public:
  explicit ConeBound(PosgModel model, LipschitzMode mode = LipschitzMode::kTheorem);

  const PosgModel& model() const { return model_; }
  const LipschitzSchedule& schedule() const { return schedule_; }

  double initial(const OccupancyState& sigma) const;
  struct Eval {
    double value = 0.0;
    int id = -1;  // -1: initial bound
  };
  Eval eval(const OccupancyState& sigma) const;
  int add(Cone c);
  // Drops cones dominated at their own anchor (initial bound included).
  int prune(int tau);

  const Cone& cone(int id) const { return store_.at(id); }
  const std::vector<int>& live(int tau) const { return live_[tau]; }

 private:
  PosgModel model_;
  LipschitzSchedule schedule_;
  std::vector<std::vector<double>> mdp_;
  std::vector<Cone> store_;
  std::vector<std::vector<int>> live_;
};

double eval_cone_bound(const ConeBound& bound, const OccupancyState& sigma);

struct LocalGameSolution {
  DecisionRule b1;    // index 0 outer maximizer
  DecisionRule b2;    // index 1 inner minimizer at b1
  double upper = 0.0; // certified upper bound of max min Q
  double value = 0.0;
  long evaluations = 0;
};

// max_{b1} min_{b2} r(sigma, b) + gamma * bound_{tau+1}(T(sigma, b)) by BiDOO,
// or exactly by LP at the last stage.
LocalGameSolution solve_local_game(const ConeBound& bound, const OccupancyState& sigma, double eps1, double eps2,
                                   const DooOptions& base = {});

struct LcConfig {
  SolverConfig base;
  // DOO precision per level; defaults to epsilon / (2 H).
  double doo_epsilon = 0.0;
};

class LipschitzHsviSolver {
 public:
  LipschitzHsviSolver(const PosgModel& model, LcConfig config);
  SolveResult solve();
  int iterate();
  double eval_upper(const OccupancyState& s) const { return upper_.eval(s).value; }
  double eval_lower(const OccupancyState& s) const { return -lower_.eval(swap_occupancy(s)).value; }
  const ConeBound& upper() const { return upper_; }
  const ConeBound& lower() const { return lower_; }
  double threshold(int tau) const;

 private:
  int explore(const OccupancyState& sigma);
  void add_cone(ConeBound& side, const OccupancyState& sigma);

  PosgModel model_;
  LcConfig config_;
  ConeBound upper_;
  ConeBound lower_;
  double rho_ = 0.0;
  double doo_eps_ = 0.0;
  OccupancyState root_;
  std::chrono::steady_clock::time_point deadline_;
};

SolveResult lipschitz_hsvi_solve(const PosgModel& model, const LcConfig& config);

// Decision rule of a product point over sorted histories.
DecisionRule rule_from_point(int player, const std::vector<Hist>& histories, const ProductPoint& x);

}  // namespace zsposg
