#pragma once

#include <map>
#include <vector>

#include "zsposg/bounds.hpp"
#include "zsposg/occupancy.hpp"

namespace zsposg {

// One decision rule per stage for one player.
struct BehavioralStrategy {
  int player = 0;
  std::vector<DecisionRule> rules;
};

BehavioralStrategy uniform_strategy(const PosgModel& m, int player);

// Root V tuple of a bound. The upper bound of the game holds player 2's
// strategy; the lower bound (built on the swapped game) holds player 1's.
struct RecursiveStrategy {
  const OneSidedBound* side = nullptr;
  int root = -1;
  int player = 1;  // player index in the original game
};

// rw(theta, a) for every own history with positive weight, per stage.
struct RealizationWeights {
  std::vector<std::map<Hist, std::vector<double>>> rw;
};

struct Extraction {
  BehavioralStrategy strategy;
  RealizationWeights weights;
};

Extraction extract_behavioral(const RecursiveStrategy& strategy);
// Largest violation of rw(theta,a) = sum_a' rw(theta a z, a') over all nodes.
double realization_consistency_error(const PosgModel& m, const RealizationWeights& w, int player);

// Expected discounted return (player 1's reward).
double evaluate_profile(const PosgModel& m, const BehavioralStrategy& b1, const BehavioralStrategy& b2);
// Same value computed directly on the strategy DAG against a behavioral opponent.
double evaluate_recursive(const PosgModel& m, const RecursiveStrategy& strategy, const BehavioralStrategy& opponent);

struct BestResponse {
  BehavioralStrategy strategy;
  double value = 0.0;  // player 1's return under the best response
};

// Exact best response of `player` against a fixed opponent; player 1 maximizes, player 2 minimizes.
BestResponse best_response(const PosgModel& m, const BehavioralStrategy& opponent, int player);

// Opponent best-response gain over a reference value (non-negative up to
// numerical error when the reference is the game value).
double exploitability(const PosgModel& m, const BehavioralStrategy& strategy, int player, double reference);

// Rules expressed in the swapped game keep their history encoding.
BehavioralStrategy swap_strategy(const BehavioralStrategy& s);

}  // namespace zsposg
