#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace zsposg {

// Probabilities below this are exact zeros.
inline constexpr double kProbEps = 1e-12;

// A private history is a base-(|A|·|Z|) number whose digits are a·|Z|+z,
// oldest step first. Its length is carried separately (the stage).
using Hist = std::uint64_t;

struct Step {
  int action;
  int obs;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PosgModel {
  std::vector<std::string> state_names;
  std::vector<std::string> action_names[2];
  std::vector<std::string> obs_names[2];
  int horizon = 1;
  double discount = 1.0;
  std::vector<double> b0;
  // Flat P[s][a1][a2][s'][z1][z2] and r[s][a1][a2].
  std::vector<double> trans;
  std::vector<double> reward;
  double r_min = 0.0;
  double r_max = 0.0;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_actions(int p) const { return static_cast<int>(action_names[p].size()); }
  int num_obs(int p) const { return static_cast<int>(obs_names[p].size()); }
  // Branching factor of player p's private history tree.
  Hist branching(int p) const { return static_cast<Hist>(num_actions(p)) * num_obs(p); }

  std::size_t trans_index(int s, int a1, int a2, int s2, int z1, int z2) const {
    const std::size_t S = state_names.size();
    return ((((static_cast<std::size_t>(s) * num_actions(0) + a1) * num_actions(1) + a2) * S + s2) *
                num_obs(0) + z1) * num_obs(1) + z2;
  }
  double p(int s, int a1, int a2, int s2, int z1, int z2) const {
    return trans[trans_index(s, a1, a2, s2, z1, z2)];
  }
  double r(int s, int a1, int a2) const {
    return reward[(static_cast<std::size_t>(s) * num_actions(0) + a1) * num_actions(1) + a2];
  }

  // Recomputes r_min/r_max and checks every invariant; throws ModelError.
  void validate();
};

PosgModel parse_model(std::string_view text);
PosgModel load_model(const std::filesystem::path& path);

// Same game seen from the other side: players exchanged, rewards negated.
PosgModel swap_players(const PosgModel& m);

Hist extend(const PosgModel& m, int player, Hist h, int action, int obs);
Hist parent(const PosgModel& m, int player, Hist h);
Step last_step(const PosgModel& m, int player, Hist h);
std::vector<Step> decode(const PosgModel& m, int player, Hist h, int depth);
Hist encode(const PosgModel& m, int player, const std::vector<Step>& steps);
// Number of private histories of the given length.
Hist count_histories(const PosgModel& m, int player, int depth);

struct JointHistory {
  int depth = 0;
  Hist h1 = 0;
  Hist h2 = 0;
  auto operator<=>(const JointHistory&) const = default;
};

struct BeliefResult {
  std::vector<double> belief;
  double reach = 0.0;
  bool possible = false;
};

// Forward filtering from b0 given both players' actions and observations.
// reach excludes action probabilities.
BeliefResult belief_for_history(const PosgModel& m, const JointHistory& h);

// One Bayes step; returns the unnormalized successor and its mass.
double bayes_step(const PosgModel& m, const std::vector<double>& b, int a1, int a2, int z1, int z2,
                  std::vector<double>& out);

double expected_state_reward(const PosgModel& m, const std::vector<double>& b, int a1, int a2);

// Concurrent reads, serialized writes.
class BeliefCache {
 public:
  explicit BeliefCache(const PosgModel& m) : model_(m) {}
  BeliefResult get(const JointHistory& h);
  std::size_t size() const;

 private:
  const PosgModel& model_;
  mutable std::shared_mutex mu_;
  std::map<JointHistory, BeliefResult> cache_;
};

// Finite-horizon h(H, τ, γ): number of remaining discounted steps.
double horizon_factor(int H, int tau, double gamma);

}  // namespace zsposg
