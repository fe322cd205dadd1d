#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zsposg/occupancy.hpp"
#include "zsposg/stage_game.hpp"

namespace zsposg {

enum class LipschitzMode { kTheorem, kExperimental, kCustom };
enum class Heuristic { kInit, kBmdp };

std::string to_string(LipschitzMode m);
std::string to_string(Heuristic h);

class LipschitzSchedule {
 public:
  LipschitzSchedule() = default;
  static LipschitzSchedule theorem(int H, double gamma, double r_min, double r_max);
  static LipschitzSchedule experimental(int H, double gamma, double r_min, double r_max);
  static LipschitzSchedule custom(std::vector<double> lambdas, double gamma, double r_min, double r_max);
  static LipschitzSchedule for_model(const PosgModel& m, LipschitzMode mode);

  // lambda_tau, zero at tau >= H.
  double operator()(int tau) const;
  // Limit constant for discounted thresholds.
  double lambda_inf() const;
  int horizon() const { return static_cast<int>(lambda_.size()); }
  double gamma() const { return gamma_; }
  double delta_r() const { return r_max_ - r_min_; }
  LipschitzMode mode() const { return mode_; }

 private:
  std::vector<double> lambda_;
  double gamma_ = 1.0;
  double r_min_ = 0.0, r_max_ = 0.0;
  LipschitzMode mode_ = LipschitzMode::kTheorem;
};

// Distribution over tuple ids plus per-history values.
struct Payload {
  std::vector<int> ids;
  std::vector<double> probs;
  std::map<Hist, double> nu;
};

struct VTuple {
  int id = -1;
  int tau = 0;
  Conditional cond;
  Payload payload;
};

// Opponent rule at stage tau with the conditional it was built on, the
// continuation payload at tau+1 (absent at the last stage) and the cached
// conditional it induces at tau+1.
struct WTuple {
  int id = -1;
  int tau = 0;
  std::optional<Conditional> cond;
  DecisionRule rule;
  std::optional<Payload> payload;
  std::optional<Conditional> next_cond;
};

struct BoundOptions {
  LipschitzMode lipschitz = LipschitzMode::kTheorem;
  Heuristic heuristic = Heuristic::kBmdp;
  int prune_period = 50;
};

// Upper bound on the value of a game in which player 1 maximizes. The lower
// bound of a game is the negated upper bound of swap_players(game).
class OneSidedBound {
 public:
  OneSidedBound(PosgModel model, BoundOptions options);

  const PosgModel& model() const { return model_; }
  const LipschitzSchedule& schedule() const { return schedule_; }
  const BoundOptions& options() const { return options_; }
  int horizon() const { return model_.horizon; }

  // Installs the uniform-opponent tuples and the heuristic tables.
  void initialize();

  struct Eval {
    double value = 0.0;
    int id = -1;
  };
  Eval eval(const OccupancyState& sigma) const;
  Eval eval(const MarginalConditional& mc) const;
  // Value of one V tuple's surface at sigma.
  double surface_value(const VTuple& v, const MarginalConditional& mc) const;

  StageGameMatrix build_matrix(const OccupancyState& sigma) const;

  // Heuristic value of an own history at stage tau whose conditional row is
  // known (row may be null when only the table is consulted).
  double missing_component(int tau, Hist h, const CondRow* row) const;
  double v_max(int tau) const;
  double mdp_value(int tau, int s) const { return mdp_[tau][s]; }

  struct UpdateResult {
    int v_id = -1;
    int w_id = -1;
    StageSolution dual;
  };
  // Dual LP at sigma; appends a V tuple at tau and, when a predecessor is
  // given, a W tuple at tau-1.
  UpdateResult update(const OccupancyState& sigma, const Conditional* prev_cond,
                      const DecisionRule* prev_rule);
  UpdateResult update_from(const OccupancyState& sigma, const StageGameMatrix& M,
                           const Conditional* prev_cond, const DecisionRule* prev_rule);
  // Payload-less W tuple at the last stage.
  int add_terminal_w(const Conditional& cond, const DecisionRule& rule);
  int add_v(VTuple v);
  int add_w(WTuple w);

  // Moves dominated V tuples at tau to the archive; returns how many.
  int prune_v(int tau);

  const VTuple& v(int id) const { return vstore_.at(id); }
  const WTuple& w(int id) const { return wstore_.at(id); }
  const std::vector<int>& live_v(int tau) const { return v_live_[tau]; }
  const std::vector<int>& live_w(int tau) const { return w_live_[tau]; }
  std::size_t num_v() const { return vstore_.size(); }
  std::size_t num_w() const { return wstore_.size(); }
  int init_w(int tau) const { return init_w_[tau]; }

 private:
  double column_entry_continuation(int tau, const WTuple& w, Hist child, double mass,
                                   const CondRow* current_row) const;
  bool dominated(const VTuple& k, int tau) const;

  PosgModel model_;
  BoundOptions options_;
  LipschitzSchedule schedule_;
  std::vector<std::vector<double>> mdp_;              // [tau][s], max-max
  std::vector<std::map<Hist, double>> init_table_;    // [tau][theta]
  std::vector<VTuple> vstore_;
  std::vector<WTuple> wstore_;
  std::vector<std::vector<int>> v_live_, w_live_;
  std::vector<int> init_w_;
  std::vector<int> updates_since_prune_;
};

// Complete rule: rows for every listed history, uniform where absent.
DecisionRule complete_rule(const PosgModel& m, const DecisionRule& rule, const std::vector<Hist>& histories);
std::vector<Hist> opponent_histories(const Conditional& c);

// Both bounds of one game.
class BoundSet {
 public:
  BoundSet(const PosgModel& model, BoundOptions options);
  void initialize();

  double eval_upper(const OccupancyState& sigma) const { return upper_.eval(sigma).value; }
  double eval_lower(const OccupancyState& sigma) const { return -lower_.eval(swap_occupancy(sigma)).value; }
  OneSidedBound::Eval argmin_upper(const OccupancyState& sigma) const { return upper_.eval(sigma); }
  OneSidedBound::Eval argmax_lower(const OccupancyState& sigma) const {
    return lower_.eval(swap_occupancy(sigma));
  }

  OneSidedBound& upper() { return upper_; }
  OneSidedBound& lower() { return lower_; }
  const OneSidedBound& upper() const { return upper_; }
  const OneSidedBound& lower() const { return lower_; }

 private:
  OneSidedBound upper_;
  OneSidedBound lower_;
};

// Exact cooperative finite-horizon MDP values; sign=+1 for max-max.
std::vector<std::vector<double>> cooperative_mdp_values(const PosgModel& m);

}  // namespace zsposg
