#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "zsposg/strategies.hpp"

namespace zsposg {

// Sequences of one player: the empty sequence (id 0) followed by every
// (history, action) pair, stage by stage. Information sets are histories.
struct SequenceSpace {
  int player = 0;
  int horizon = 0;
  int num_actions = 0;
  std::vector<std::size_t> offset;  // first sequence id per stage
  std::vector<std::size_t> num_histories;
  std::size_t num_sequences = 1;
  std::size_t num_infosets = 0;

  std::size_t id(int tau, Hist h, int a) const { return offset[tau] + h * num_actions + a; }
  // Parent sequence of information set (tau, h).
  std::size_t parent_sequence(const PosgModel& m, int tau, Hist h) const;
};

struct SequenceFormGame {
  SequenceSpace space[2];
  std::map<std::pair<std::size_t, std::size_t>, double> payoff;  // sparse A
};

SequenceFormGame build_sequence_form(const PosgModel& m, int horizon, std::size_t max_joint_histories = 5000000);

struct ExactSolution {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  BehavioralStrategy b1;
  BehavioralStrategy b2;
  std::size_t num_sequences[2] = {0, 0};
};

ExactSolution solve_exact(const PosgModel& m, int horizon);
ExactSolution solve_sequence_form(const PosgModel& m, const SequenceFormGame& game);

// Child weight over parent weight, uniform where the parent weight is zero.
BehavioralStrategy plan_to_behavioral(const PosgModel& m, const SequenceSpace& space, const std::vector<double>& plan);

}  // namespace zsposg
