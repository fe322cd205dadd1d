#include "zsposg/strategies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace zsposg {

namespace {

const std::vector<double>& strict_row(const DecisionRule& rule, Hist h) {
  auto* row = rule.find(h);
  if (!row)
    throw MissingRuleError("no rule row for reachable history " + std::to_string(h) + " of player " +
                           std::to_string(rule.player + 1));
  return *row;
}

std::vector<double> row_or_uniform(const DecisionRule& rule, Hist h, int A) {
  auto* row = rule.find(h);
  return row ? *row : std::vector<double>(A, 1.0 / A);
}

struct MaxBr {
  std::vector<DecisionRule> rules;
  double value = 0.0;
};

// Player index 0 maximizes against fixed rules of index 1.
MaxBr best_response_max(const PosgModel& m, const std::vector<DecisionRule>& opp) {
  const int H = m.horizon, S = m.num_states();
  const int A0 = m.num_actions(0), A1 = m.num_actions(1);
  const int Z0 = m.num_obs(0), Z1 = m.num_obs(1);
  using Alpha = std::map<Hist, std::map<Hist, std::vector<double>>>;
  std::vector<Alpha> alpha(H);
  alpha[0][0][0] = m.b0;
  for (int t = 0; t + 1 < H; ++t) {
    for (const auto& [h0, inner] : alpha[t])
      for (int a0 = 0; a0 < A0; ++a0)
        for (int z0 = 0; z0 < Z0; ++z0) {
          std::map<Hist, std::vector<double>> child;
          for (const auto& [h1, st] : inner) {
            const auto& r1 = strict_row(opp[t], h1);
            for (int a1 = 0; a1 < A1; ++a1) {
              if (r1[a1] <= 0.0) continue;
              for (int z1 = 0; z1 < Z1; ++z1) {
                std::vector<double> nx(S, 0.0);
                double mass = 0.0;
                for (int s = 0; s < S; ++s) {
                  if (st[s] <= 0.0) continue;
                  for (int s2 = 0; s2 < S; ++s2) {
                    double v = st[s] * r1[a1] * m.p(s, a0, a1, s2, z0, z1);
                    nx[s2] += v;
                    mass += v;
                  }
                }
                if (mass < 1e-15) continue;
                child[extend(m, 1, h1, a1, z1)] = std::move(nx);
              }
            }
          }
          if (!child.empty()) alpha[t + 1][extend(m, 0, h0, a0, z0)] = std::move(child);
        }
  }
  MaxBr out;
  out.rules.resize(H);
  std::vector<std::map<Hist, double>> V(H + 1);
  for (int t = H - 1; t >= 0; --t) {
    out.rules[t].player = 0;
    for (const auto& [h0, inner] : alpha[t]) {
      double best = -std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int a0 = 0; a0 < A0; ++a0) {
        double q = 0.0;
        for (const auto& [h1, st] : inner) {
          const auto& r1 = strict_row(opp[t], h1);
          for (int a1 = 0; a1 < A1; ++a1)
            if (r1[a1] > 0.0)
              for (int s = 0; s < S; ++s) q += st[s] * r1[a1] * m.r(s, a0, a1);
        }
        if (t + 1 < H)
          for (int z0 = 0; z0 < Z0; ++z0) {
            auto it = V[t + 1].find(extend(m, 0, h0, a0, z0));
            if (it != V[t + 1].end()) q += m.discount * it->second;
          }
        if (q > best + 1e-12) {
          best = q;
          arg = a0;
        }
      }
      V[t][h0] = best;
      std::vector<double> row(A0, 0.0);
      row[arg] = 1.0;
      out.rules[t].rows[h0] = row;
    }
  }
  out.value = V[0][0];
  return out;
}

}  // namespace

BehavioralStrategy uniform_strategy(const PosgModel& m, int player) {
  BehavioralStrategy s;
  s.player = player;
  for (int t = 0; t < m.horizon; ++t) {
    std::vector<Hist> hs;
    for (Hist h = 0; h < count_histories(m, player, t); ++h) hs.push_back(h);
    s.rules.push_back(uniform_rule(m, player, hs));
  }
  return s;
}

BehavioralStrategy swap_strategy(const BehavioralStrategy& s) {
  BehavioralStrategy out = s;
  out.player = 1 - s.player;
  for (auto& r : out.rules) r.player = 1 - r.player;
  return out;
}

Extraction extract_behavioral(const RecursiveStrategy& strategy) {
  const OneSidedBound& side = *strategy.side;
  const PosgModel& m = side.model();
  const int H = m.horizon, A = m.num_actions(1), Z = m.num_obs(1);
  Extraction out;
  out.strategy.player = strategy.player;
  out.strategy.rules.resize(H);
  out.weights.rw.resize(H);
  // omega[theta][w]: own realization weight of theta jointly with being at node w.
  std::map<Hist, std::map<int, double>> omega;
  const VTuple& root = side.v(strategy.root);
  for (std::size_t k = 0; k < root.payload.ids.size(); ++k) omega[0][root.payload.ids[k]] += root.payload.probs[k];
  for (int t = 0; t < H; ++t) {
    std::map<Hist, std::map<int, double>> next;
    out.strategy.rules[t].player = strategy.player;
    for (const auto& [h, nodes] : omega) {
      std::vector<double> rw(A, 0.0);
      for (const auto& [wid, weight] : nodes) {
        const WTuple& w = side.w(wid);
        const auto row = row_or_uniform(w.rule, h, A);
        for (int a = 0; a < A; ++a) {
          const double wa = weight * row[a];
          if (wa <= 0.0) continue;
          rw[a] += wa;
          if (t + 1 < H && w.payload)
            for (std::size_t k = 0; k < w.payload->ids.size(); ++k)
              for (int z = 0; z < Z; ++z) next[extend(m, 1, h, a, z)][w.payload->ids[k]] += wa * w.payload->probs[k];
        }
      }
      double total = 0.0;
      for (double v : rw) total += v;
      if (total <= 0.0) continue;
      std::vector<double> beta(A);
      for (int a = 0; a < A; ++a) beta[a] = rw[a] / total;
      out.strategy.rules[t].rows[h] = beta;
      out.weights.rw[t][h] = rw;
    }
    omega = std::move(next);
  }
  return out;
}

double realization_consistency_error(const PosgModel& m, const RealizationWeights& w, int player) {
  double err = 0.0;
  const int Z = m.num_obs(player);
  for (std::size_t t = 1; t < w.rw.size(); ++t) {
    for (const auto& [p, rw] : w.rw[t - 1]) {
      for (std::size_t a = 0; a < rw.size(); ++a) {
        for (int z = 0; z < Z; ++z) {
          auto it = w.rw[t].find(extend(m, player, p, static_cast<int>(a), z));
          double sum = 0.0;
          if (it != w.rw[t].end())
            for (double v : it->second) sum += v;
          err = std::max(err, std::abs(rw[a] - sum));
        }
      }
    }
    for (const auto& [h, rw] : w.rw[t]) {
      const Step st = last_step(m, player, h);
      auto it = w.rw[t - 1].find(parent(m, player, h));
      const double pw = it == w.rw[t - 1].end() ? 0.0 : it->second[st.action];
      double sum = 0.0;
      for (double v : rw) sum += v;
      err = std::max(err, std::abs(pw - sum));
    }
  }
  for (const auto& [h, rw] : w.rw.empty() ? std::map<Hist, std::vector<double>>{} : w.rw[0]) {
    double sum = 0.0;
    for (double v : rw) sum += v;
    err = std::max(err, std::abs(1.0 - sum));
  }
  return err;
}

double evaluate_profile(const PosgModel& m, const BehavioralStrategy& b1, const BehavioralStrategy& b2) {
  OccupancyState sigma = initial_occupancy(m);
  double value = 0.0, disc = 1.0;
  for (int t = 0; t < m.horizon; ++t) {
    value += disc * expected_reward(m, sigma, b1.rules[t], b2.rules[t]);
    if (t + 1 < m.horizon) sigma = transition(m, sigma, b1.rules[t], b2.rules[t]);
    disc *= m.discount;
  }
  return value;
}

double evaluate_recursive(const PosgModel& orig, const RecursiveStrategy& strategy,
                          const BehavioralStrategy& opponent) {
  const OneSidedBound& side = *strategy.side;
  const PosgModel& m = side.model();
  const BehavioralStrategy opp = strategy.player == 1 ? opponent : swap_strategy(opponent);
  (void)orig;
  const int S = m.num_states(), H = m.horizon;
  const int A0 = m.num_actions(0), A1 = m.num_actions(1), Z0 = m.num_obs(0), Z1 = m.num_obs(1);
  using Key = std::tuple<Hist, Hist, int>;
  std::map<Key, std::pair<double, std::vector<double>>> cur;
  const VTuple& root = side.v(strategy.root);
  for (std::size_t k = 0; k < root.payload.ids.size(); ++k)
    cur[{0, 0, root.payload.ids[k]}] = {root.payload.probs[k], m.b0};
  double value = 0.0, disc = 1.0;
  std::vector<double> nx(S);
  for (int t = 0; t < H; ++t) {
    std::map<Key, std::pair<double, std::vector<double>>> next;
    for (const auto& [key, pb] : cur) {
      const auto& [h0, h1, wid] = key;
      const WTuple& w = side.w(wid);
      const auto& r0 = strict_row(opp.rules[t], h0);
      const auto r1 = row_or_uniform(w.rule, h1, A1);
      for (int a0 = 0; a0 < A0; ++a0) {
        if (r0[a0] <= 0.0) continue;
        for (int a1 = 0; a1 < A1; ++a1) {
          if (r1[a1] <= 0.0) continue;
          const double p = pb.first * r0[a0] * r1[a1];
          value += disc * p * expected_state_reward(m, pb.second, a0, a1);
          if (t + 1 >= H || !w.payload) continue;
          for (int z0 = 0; z0 < Z0; ++z0)
            for (int z1 = 0; z1 < Z1; ++z1) {
              const double mass = bayes_step(m, pb.second, a0, a1, z0, z1, nx);
              if (mass <= 0.0) continue;
              for (std::size_t k = 0; k < w.payload->ids.size(); ++k) {
                auto& slot = next[{extend(m, 0, h0, a0, z0), extend(m, 1, h1, a1, z1), w.payload->ids[k]}];
                if (slot.second.empty()) slot.second.assign(S, 0.0);
                const double q = p * w.payload->probs[k];
                slot.first += q * mass;
                for (int s = 0; s < S; ++s) slot.second[s] += q * nx[s];
              }
            }
        }
      }
    }
    for (auto& [key, pb] : next) {
      double tot = 0.0;
      for (double v : pb.second) tot += v;
      if (tot > 0.0)
        for (double& v : pb.second) v /= tot;
    }
    cur = std::move(next);
    disc *= m.discount;
  }
  return strategy.player == 1 ? value : -value;
}

BestResponse best_response(const PosgModel& m, const BehavioralStrategy& opponent, int player) {
  BestResponse out;
  if (player == 0) {
    MaxBr br = best_response_max(m, opponent.rules);
    out.value = br.value;
    out.strategy.player = 0;
    out.strategy.rules = std::move(br.rules);
  } else {
    PosgModel w = swap_players(m);
    BehavioralStrategy opp = swap_strategy(opponent);
    MaxBr br = best_response_max(w, opp.rules);
    out.value = -br.value;
    out.strategy.player = 0;
    out.strategy.rules = std::move(br.rules);
    out.strategy = swap_strategy(out.strategy);
  }
  return out;
}

double exploitability(const PosgModel& m, const BehavioralStrategy& strategy, int player, double reference) {
  const BestResponse br = best_response(m, strategy, 1 - player);
  return player == 1 ? br.value - reference : reference - br.value;
}

}  // namespace zsposg
