#include "zsposg/sequence_form.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "zsposg/lp.hpp"

namespace zsposg {

namespace {

SequenceSpace make_space(const PosgModel& m, int player, int H) {
  SequenceSpace sp;
  sp.player = player;
  sp.horizon = H;
  sp.num_actions = m.num_actions(player);
  std::size_t next = 1;
  for (int t = 0; t < H; ++t) {
    const std::size_t n = count_histories(m, player, t);
    sp.offset.push_back(next);
    sp.num_histories.push_back(n);
    next += n * sp.num_actions;
    sp.num_infosets += n;
  }
  sp.num_sequences = next;
  return sp;
}

}  // namespace

std::size_t SequenceSpace::parent_sequence(const PosgModel& m, int tau, Hist h) const {
  if (tau == 0) return 0;
  const Step st = last_step(m, player, h);
  return id(tau - 1, parent(m, player, h), st.action);
}

SequenceFormGame build_sequence_form(const PosgModel& m, int H, std::size_t max_joint_histories) {
  SequenceFormGame g;
  g.space[0] = make_space(m, 0, H);
  g.space[1] = make_space(m, 1, H);
  const int S = m.num_states();
  const int A1 = m.num_actions(0), A2 = m.num_actions(1), Z1 = m.num_obs(0), Z2 = m.num_obs(1);
  std::size_t visited = 0;
  std::vector<std::vector<double>> scratch(H + 1, std::vector<double>(S));
  // alpha(s) = Pr(s, observations | actions), chance only.
  std::function<void(int, Hist, Hist, const std::vector<double>&, double)> rec =
      [&](int t, Hist h1, Hist h2, const std::vector<double>& alpha, double disc) {
        if (++visited > max_joint_histories) throw std::length_error("sequence form: joint history limit exceeded");
        for (int a1 = 0; a1 < A1; ++a1)
          for (int a2 = 0; a2 < A2; ++a2) {
            double r = 0.0;
            for (int s = 0; s < S; ++s) r += alpha[s] * m.r(s, a1, a2);
            if (r != 0.0) g.payoff[{g.space[0].id(t, h1, a1), g.space[1].id(t, h2, a2)}] += disc * r;
            if (t + 1 >= H) continue;
            for (int z1 = 0; z1 < Z1; ++z1)
              for (int z2 = 0; z2 < Z2; ++z2) {
                std::vector<double> nx(S, 0.0);
                double mass = 0.0;
                for (int s = 0; s < S; ++s) {
                  if (alpha[s] <= 0.0) continue;
                  for (int s2 = 0; s2 < S; ++s2) {
                    const double v = alpha[s] * m.p(s, a1, a2, s2, z1, z2);
                    nx[s2] += v;
                    mass += v;
                  }
                }
                if (mass < kProbEps) continue;
                rec(t + 1, extend(m, 0, h1, a1, z1), extend(m, 1, h2, a2, z2), nx, disc * m.discount);
              }
          }
      };
  rec(0, 0, 0, m.b0, 1.0);
  return g;
}

BehavioralStrategy plan_to_behavioral(const PosgModel& m, const SequenceSpace& sp, const std::vector<double>& plan) {
  BehavioralStrategy b;
  b.player = sp.player;
  const int A = sp.num_actions;
  for (int t = 0; t < sp.horizon; ++t) {
    DecisionRule rule;
    rule.player = sp.player;
    for (Hist h = 0; h < sp.num_histories[t]; ++h) {
      const double pw = plan[sp.parent_sequence(m, t, h)];
      std::vector<double> row(A, 1.0 / A);
      if (pw > 1e-12) {
        double s = 0.0;
        for (int a = 0; a < A; ++a) s += row[a] = std::max(0.0, plan[sp.id(t, h, a)]);
        if (s > 0.0)
          for (double& v : row) v /= s;
        else
          row.assign(A, 1.0 / A);
      }
      rule.rows[h] = row;
    }
    b.rules.push_back(std::move(rule));
  }
  return b;
}

ExactSolution solve_sequence_form(const PosgModel& m, const SequenceFormGame& g) {
  const SequenceSpace& s1 = g.space[0];
  const SequenceSpace& s2 = g.space[1];
  const int n1 = static_cast<int>(s1.num_sequences);
  const int n2 = static_cast<int>(s2.num_sequences);
  const int k2 = static_cast<int>(s2.num_infosets) + 1;  // rows of F (root first)
  // Variables: x (n1), q (k2, free). maximize q_0.
  // Rows: A'x - F'q >= 0 (one per player-2 sequence), E x = e.
  LpProblem P(n1 + k2);
  P.objective[n1] = 1.0;
  for (int k = 0; k < k2; ++k) P.free_var[n1 + k] = true;
  for (int j = 0; j < n2; ++j) P.add_row(RowType::kGe, 0.0);
  for (const auto& [key, v] : g.payoff) P.rows[key.second].coefs[key.first] += v;
  // F: root row y_0 = 1; infoset row: -y_parent + sum_a y(I,a) = 0.
  P.rows[0].coefs[n1 + 0] -= 1.0;
  {
    int k = 1;
    for (int t = 0; t < s2.horizon; ++t)
      for (Hist h = 0; h < s2.num_histories[t]; ++h, ++k) {
        P.rows[s2.parent_sequence(m, t, h)].coefs[n1 + k] += 1.0;
        for (int a = 0; a < s2.num_actions; ++a) P.rows[s2.id(t, h, a)].coefs[n1 + k] -= 1.0;
      }
  }
  {
    auto& root = P.add_row(RowType::kEq, 1.0);
    root.coefs[0] = 1.0;
    for (int t = 0; t < s1.horizon; ++t)
      for (Hist h = 0; h < s1.num_histories[t]; ++h) {
        auto& row = P.add_row(RowType::kEq, 0.0);
        row.coefs[s1.parent_sequence(m, t, h)] = -1.0;
        for (int a = 0; a < s1.num_actions; ++a) row.coefs[s1.id(t, h, a)] = 1.0;
      }
  }
  LpResult res = lp_solve(P);
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("sequence form LP: " + to_string(res.status));
  ExactSolution out;
  out.value = res.objective;
  out.x.assign(res.x.begin(), res.x.begin() + n1);
  out.y.assign(n2, 0.0);
  for (int j = 0; j < n2; ++j) out.y[j] = std::max(0.0, -res.duals[j]);
  out.num_sequences[0] = s1.num_sequences;
  out.num_sequences[1] = s2.num_sequences;
  out.b1 = plan_to_behavioral(m, s1, out.x);
  out.b2 = plan_to_behavioral(m, s2, out.y);
  return out;
}

ExactSolution solve_exact(const PosgModel& m, int horizon) {
  return solve_sequence_form(m, build_sequence_form(m, horizon));
}

}  // namespace zsposg
