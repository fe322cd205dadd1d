#pragma once

#include <map>
#include <vector>

#include "zsposg/model.hpp"

namespace zsposg {

struct OccEntry {
  Hist h1 = 0;
  Hist h2 = 0;
  double p = 0.0;
  std::vector<double> belief;
};

// Distribution over joint histories of length tau, sorted by (h1, h2), zeros dropped.
struct OccupancyState {
  int tau = 0;
  std::vector<OccEntry> entries;

  double total() const;
  const OccEntry* find(Hist h1, Hist h2) const;
};

OccupancyState initial_occupancy(const PosgModel& m);

// Player-indexed map from private histories to action distributions.
struct DecisionRule {
  int player = 0;
  std::map<Hist, std::vector<double>> rows;

  const std::vector<double>* find(Hist h) const {
    auto it = rows.find(h);
    return it == rows.end() ? nullptr : &it->second;
  }
};

DecisionRule uniform_rule(const PosgModel& m, int player, const std::vector<Hist>& histories);
DecisionRule deterministic_rule(const PosgModel& m, int player, const std::vector<Hist>& histories,
                                int action);
// Histories of the given player present in the support of sigma.
std::vector<Hist> support(const OccupancyState& sigma, int player);

class MissingRuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

OccupancyState transition(const PosgModel& m, const OccupancyState& sigma, const DecisionRule& b1,
                          const DecisionRule& b2);
double expected_reward(const PosgModel& m, const OccupancyState& sigma, const DecisionRule& b1,
                       const DecisionRule& b2);

struct CondEntry {
  Hist other = 0;
  double p = 0.0;
  std::vector<double> belief;
};
using CondRow = std::vector<CondEntry>;  // sorted by other

// Player-i conditional: for each own history, a distribution over the opponent's.
struct Conditional {
  int player = 0;
  int tau = 0;
  std::map<Hist, CondRow> rows;

  const CondRow* find(Hist h) const {
    auto it = rows.find(h);
    return it == rows.end() ? nullptr : &it->second;
  }
};

struct MarginalConditional {
  int player = 0;
  int tau = 0;
  std::map<Hist, double> marginal;
  Conditional conditional;
};

MarginalConditional decompose(const OccupancyState& sigma, int player);
OccupancyState recompose(const MarginalConditional& mc);

// Player-i marginal of T(sigma, b1, b2) over extended own histories.
std::map<Hist, double> transition_marginal(const PosgModel& m, const OccupancyState& sigma,
                                           const DecisionRule& b1, const DecisionRule& b2,
                                           int player);
// Conditional of T(sigma, ·, other_rule); rows for every own action and observation,
// absent when unreachable. Takes no own rule and no marginal by construction.
Conditional transition_conditional(const PosgModel& m, const Conditional& cond,
                                   const DecisionRule& other_rule);

double distance_l1(const OccupancyState& a, const OccupancyState& b);
double row_distance(const CondRow& a, const CondRow& b);

// Exchanges the roles of h1 and h2 to match swap_players().
OccupancyState swap_occupancy(const OccupancyState& sigma);
DecisionRule with_player(DecisionRule rule, int player);

}  // namespace zsposg
