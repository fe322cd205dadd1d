#include "zsposg/occupancy.hpp"

#include <algorithm>
#include <cmath>

namespace zsposg {

namespace {

const std::vector<double>& rule_row(const DecisionRule& rule, Hist h) {
  auto* row = rule.find(h);
  if (!row)
    throw MissingRuleError("decision rule of player " + std::to_string(rule.player + 1) +
                           " has no row for history " + std::to_string(h));
  return *row;
}

struct Accum {
  double p = 0.0;
  std::vector<double> state_mass;
};

}  // namespace

double OccupancyState::total() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.p;
  return t;
}

const OccEntry* OccupancyState::find(Hist h1, Hist h2) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(h1, h2),
                             [](const OccEntry& e, const std::pair<Hist, Hist>& k) {
                               return std::make_pair(e.h1, e.h2) < k;
                             });
  if (it == entries.end() || it->h1 != h1 || it->h2 != h2) return nullptr;
  return &*it;
}

OccupancyState initial_occupancy(const PosgModel& m) {
  OccupancyState s;
  s.tau = 0;
  s.entries.push_back({0, 0, 1.0, m.b0});
  return s;
}

DecisionRule uniform_rule(const PosgModel& m, int player, const std::vector<Hist>& histories) {
  DecisionRule r;
  r.player = player;
  const int A = m.num_actions(player);
  for (Hist h : histories) r.rows[h] = std::vector<double>(A, 1.0 / A);
  return r;
}

DecisionRule deterministic_rule(const PosgModel& m, int player, const std::vector<Hist>& histories,
                                int action) {
  DecisionRule r;
  r.player = player;
  for (Hist h : histories) {
    std::vector<double> row(m.num_actions(player), 0.0);
    row[action] = 1.0;
    r.rows[h] = row;
  }
  return r;
}

std::vector<Hist> support(const OccupancyState& sigma, int player) {
  std::vector<Hist> out;
  for (const auto& e : sigma.entries) out.push_back(player == 0 ? e.h1 : e.h2);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OccupancyState transition(const PosgModel& m, const OccupancyState& sigma, const DecisionRule& b1,
                          const DecisionRule& b2) {
  const int S = m.num_states();
  const int A1 = m.num_actions(0), A2 = m.num_actions(1);
  const int Z1 = m.num_obs(0), Z2 = m.num_obs(1);
  std::map<std::pair<Hist, Hist>, Accum> acc;
  for (const auto& e : sigma.entries) {
    const auto& r1 = rule_row(b1, e.h1);
    const auto& r2 = rule_row(b2, e.h2);
    for (int a1 = 0; a1 < A1; ++a1) {
      if (r1[a1] <= 0.0) continue;
      for (int a2 = 0; a2 < A2; ++a2) {
        if (r2[a2] <= 0.0) continue;
        const double w = e.p * r1[a1] * r2[a2];
        for (int z1 = 0; z1 < Z1; ++z1)
          for (int z2 = 0; z2 < Z2; ++z2) {
            Accum* slot = nullptr;
            for (int s = 0; s < S; ++s) {
              if (e.belief[s] <= 0.0) continue;
              for (int s2 = 0; s2 < S; ++s2) {
                double pr = m.p(s, a1, a2, s2, z1, z2);
                if (pr <= 0.0) continue;
                if (!slot) {
                  slot = &acc[{extend(m, 0, e.h1, a1, z1), extend(m, 1, e.h2, a2, z2)}];
                  if (slot->state_mass.empty()) slot->state_mass.assign(S, 0.0);
                }
                slot->state_mass[s2] += w * e.belief[s] * pr;
              }
            }
          }
      }
    }
  }
  OccupancyState out;
  out.tau = sigma.tau + 1;
  for (auto& [key, a] : acc) {
    double mass = 0.0;
    for (double v : a.state_mass) mass += v;
    if (mass < kProbEps) continue;
    for (double& v : a.state_mass) v /= mass;
    out.entries.push_back({key.first, key.second, mass, std::move(a.state_mass)});
  }
  return out;
}

double expected_reward(const PosgModel& m, const OccupancyState& sigma, const DecisionRule& b1,
                       const DecisionRule& b2) {
  double v = 0.0;
  for (const auto& e : sigma.entries) {
    const auto& r1 = rule_row(b1, e.h1);
    const auto& r2 = rule_row(b2, e.h2);
    for (int a1 = 0; a1 < m.num_actions(0); ++a1) {
      if (r1[a1] <= 0.0) continue;
      for (int a2 = 0; a2 < m.num_actions(1); ++a2) {
        if (r2[a2] <= 0.0) continue;
        v += e.p * r1[a1] * r2[a2] * expected_state_reward(m, e.belief, a1, a2);
      }
    }
  }
  return v;
}

MarginalConditional decompose(const OccupancyState& sigma, int player) {
  MarginalConditional mc;
  mc.player = player;
  mc.tau = sigma.tau;
  mc.conditional.player = player;
  mc.conditional.tau = sigma.tau;
  for (const auto& e : sigma.entries) {
    Hist own = player == 0 ? e.h1 : e.h2;
    Hist other = player == 0 ? e.h2 : e.h1;
    mc.marginal[own] += e.p;
    mc.conditional.rows[own].push_back({other, e.p, e.belief});
  }
  for (auto& [own, row] : mc.conditional.rows) {
    const double m = mc.marginal[own];
    for (auto& ce : row) ce.p /= m;
    std::sort(row.begin(), row.end(), [](const CondEntry& a, const CondEntry& b) { return a.other < b.other; });
  }
  return mc;
}

OccupancyState recompose(const MarginalConditional& mc) {
  OccupancyState out;
  out.tau = mc.tau;
  for (const auto& [own, mass] : mc.marginal) {
    auto* row = mc.conditional.find(own);
    if (!row) continue;
    for (const auto& ce : *row) {
      Hist h1 = mc.player == 0 ? own : ce.other;
      Hist h2 = mc.player == 0 ? ce.other : own;
      out.entries.push_back({h1, h2, mass * ce.p, ce.belief});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const OccEntry& a, const OccEntry& b) {
    return std::make_pair(a.h1, a.h2) < std::make_pair(b.h1, b.h2);
  });
  return out;
}

std::map<Hist, double> transition_marginal(const PosgModel& m, const OccupancyState& sigma,
                                           const DecisionRule& b1, const DecisionRule& b2,
                                           int player) {
  const int S = m.num_states();
  std::map<Hist, double> out;
  for (const auto& e : sigma.entries) {
    const auto& r1 = rule_row(b1, e.h1);
    const auto& r2 = rule_row(b2, e.h2);
    for (int a1 = 0; a1 < m.num_actions(0); ++a1) {
      if (r1[a1] <= 0.0) continue;
      for (int a2 = 0; a2 < m.num_actions(1); ++a2) {
        if (r2[a2] <= 0.0) continue;
        const double w = e.p * r1[a1] * r2[a2];
        for (int z1 = 0; z1 < m.num_obs(0); ++z1)
          for (int z2 = 0; z2 < m.num_obs(1); ++z2) {
            double pr = 0.0;
            for (int s = 0; s < S; ++s) {
              if (e.belief[s] <= 0.0) continue;
              for (int s2 = 0; s2 < S; ++s2) pr += e.belief[s] * m.p(s, a1, a2, s2, z1, z2);
            }
            if (pr <= 0.0) continue;
            Hist own = player == 0 ? extend(m, 0, e.h1, a1, z1) : extend(m, 1, e.h2, a2, z2);
            out[own] += w * pr;
          }
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second < kProbEps)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

Conditional transition_conditional(const PosgModel& m, const Conditional& cond,
                                   const DecisionRule& other_rule) {
  const int i = cond.player;
  const int o = 1 - i;
  const int S = m.num_states();
  Conditional out;
  out.player = i;
  out.tau = cond.tau + 1;
  std::vector<double> next(S);
  for (const auto& [own, row] : cond.rows) {
    for (int ai = 0; ai < m.num_actions(i); ++ai)
      for (int zi = 0; zi < m.num_obs(i); ++zi) {
        std::map<Hist, std::pair<double, std::vector<double>>> child;
        double total = 0.0;
        for (const auto& ce : row) {
          const auto& ro = rule_row(other_rule, ce.other);
          for (int ao = 0; ao < m.num_actions(o); ++ao) {
            if (ro[ao] <= 0.0) continue;
            for (int zo = 0; zo < m.num_obs(o); ++zo) {
              const int a1 = i == 0 ? ai : ao, a2 = i == 0 ? ao : ai;
              const int z1 = i == 0 ? zi : zo, z2 = i == 0 ? zo : zi;
              double mass = bayes_step(m, ce.belief, a1, a2, z1, z2, next);
              double w = ce.p * ro[ao] * mass;
              if (w <= 0.0) continue;
              auto& slot = child[extend(m, o, ce.other, ao, zo)];
              if (slot.second.empty()) slot.second.assign(S, 0.0);
              slot.first += w;
              for (int s = 0; s < S; ++s) slot.second[s] += ce.p * ro[ao] * next[s];
              total += w;
            }
          }
        }
        if (total < kProbEps) continue;
        CondRow nrow;
        for (auto& [other, pb] : child) {
          double bm = 0.0;
          for (double v : pb.second) bm += v;
          if (pb.first / total < kProbEps || bm <= 0.0) continue;
          for (double& v : pb.second) v /= bm;
          nrow.push_back({other, pb.first / total, std::move(pb.second)});
        }
        out.rows[extend(m, i, own, ai, zi)] = std::move(nrow);
      }
  }
  return out;
}

double distance_l1(const OccupancyState& a, const OccupancyState& b) {
  if (a.tau != b.tau) throw std::invalid_argument("distance_l1: timestep mismatch");
  double d = 0.0;
  auto ia = a.entries.begin(), ib = b.entries.begin();
  auto key = [](const OccEntry& e) { return std::make_pair(e.h1, e.h2); };
  while (ia != a.entries.end() || ib != b.entries.end()) {
    if (ib == b.entries.end() || (ia != a.entries.end() && key(*ia) < key(*ib))) {
      d += std::abs(ia->p);
      ++ia;
    } else if (ia == a.entries.end() || key(*ib) < key(*ia)) {
      d += std::abs(ib->p);
      ++ib;
    } else {
      d += std::abs(ia->p - ib->p);
      ++ia;
      ++ib;
    }
  }
  return d;
}

double row_distance(const CondRow& a, const CondRow& b) {
  double d = 0.0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->other < ib->other)) {
      d += std::abs(ia->p);
      ++ia;
    } else if (ia == a.end() || ib->other < ia->other) {
      d += std::abs(ib->p);
      ++ib;
    } else {
      d += std::abs(ia->p - ib->p);
      ++ia;
      ++ib;
    }
  }
  return d;
}

OccupancyState swap_occupancy(const OccupancyState& sigma) {
  OccupancyState out;
  out.tau = sigma.tau;
  out.entries.reserve(sigma.entries.size());
  for (const auto& e : sigma.entries) out.entries.push_back({e.h2, e.h1, e.p, e.belief});
  std::sort(out.entries.begin(), out.entries.end(), [](const OccEntry& a, const OccEntry& b) {
    return std::make_pair(a.h1, a.h2) < std::make_pair(b.h1, b.h2);
  });
  return out;
}

DecisionRule with_player(DecisionRule rule, int player) {
  rule.player = player;
  return rule;
}

}  // namespace zsposg
