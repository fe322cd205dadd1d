#include "zsposg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace zsposg {

namespace {

struct ChildRow {
  double prob = 0.0;  // Pr(z | own history, own action) under the opponent rule
  CondRow row;
};

// Successor conditional rows of one own history for a fixed own action, one per own observation.
std::vector<ChildRow> child_rows(const PosgModel& m, const CondRow& row, const DecisionRule& rule,
                                 int a1) {
  const int S = m.num_states(), A2 = m.num_actions(1);
  const int Z1 = m.num_obs(0), Z2 = m.num_obs(1);
  std::vector<ChildRow> out(Z1);
  std::vector<double> next(S);
  for (const auto& ce : row) {
    const auto* r2 = rule.find(ce.other);
    for (int a2 = 0; a2 < A2; ++a2) {
      const double pa = r2 ? (*r2)[a2] : 1.0 / A2;
      if (pa <= 0.0) continue;
      for (int z1 = 0; z1 < Z1; ++z1)
        for (int z2 = 0; z2 < Z2; ++z2) {
          const double mass = bayes_step(m, ce.belief, a1, a2, z1, z2, next);
          const double w = ce.p * pa * mass;
          if (w <= 0.0) continue;
          for (double& v : next) v /= mass;
          out[z1].prob += w;
          out[z1].row.push_back({extend(m, 1, ce.other, a2, z2), w, next});
        }
    }
  }
  for (auto& c : out) {
    if (c.prob < kProbEps) {
      c.prob = 0.0;
      c.row.clear();
      continue;
    }
    CondRow kept;
    for (auto& ce : c.row) {
      ce.p /= c.prob;
      if (ce.p >= kProbEps) kept.push_back(std::move(ce));
    }
    std::sort(kept.begin(), kept.end(), [](const CondEntry& a, const CondEntry& b) { return a.other < b.other; });
    c.row = std::move(kept);
  }
  return out;
}

double row_reward(const PosgModel& m, const CondRow& row, const DecisionRule& rule, int a1) {
  const int A2 = m.num_actions(1);
  double v = 0.0;
  for (const auto& ce : row) {
    const auto* r2 = rule.find(ce.other);
    for (int a2 = 0; a2 < A2; ++a2) {
      const double pa = r2 ? (*r2)[a2] : 1.0 / A2;
      if (pa > 0.0) v += ce.p * pa * expected_state_reward(m, ce.belief, a1, a2);
    }
  }
  return v;
}

}  // namespace

std::string to_string(LipschitzMode m) {
  switch (m) {
    case LipschitzMode::kTheorem: return "theorem";
    case LipschitzMode::kExperimental: return "experimental";
    case LipschitzMode::kCustom: return "custom";
  }
  return "unknown";
}

std::string to_string(Heuristic h) { return h == Heuristic::kInit ? "init" : "bmdp"; }

LipschitzSchedule LipschitzSchedule::theorem(int H, double gamma, double r_min, double r_max) {
  LipschitzSchedule s;
  s.gamma_ = gamma;
  s.r_min_ = r_min;
  s.r_max_ = r_max;
  s.mode_ = LipschitzMode::kTheorem;
  for (int t = 0; t < H; ++t) s.lambda_.push_back(0.5 * horizon_factor(H, t, gamma) * (r_max - r_min));
  return s;
}

LipschitzSchedule LipschitzSchedule::experimental(int H, double gamma, double r_min, double r_max) {
  LipschitzSchedule s;
  s.gamma_ = gamma;
  s.r_min_ = r_min;
  s.r_max_ = r_max;
  s.mode_ = LipschitzMode::kExperimental;
  s.lambda_.assign(H, H * (r_max - r_min));
  return s;
}

LipschitzSchedule LipschitzSchedule::custom(std::vector<double> lambdas, double gamma, double r_min,
                                            double r_max) {
  LipschitzSchedule s;
  s.gamma_ = gamma;
  s.r_min_ = r_min;
  s.r_max_ = r_max;
  s.mode_ = LipschitzMode::kCustom;
  s.lambda_ = std::move(lambdas);
  return s;
}

LipschitzSchedule LipschitzSchedule::for_model(const PosgModel& m, LipschitzMode mode) {
  if (mode == LipschitzMode::kExperimental) return experimental(m.horizon, m.discount, m.r_min, m.r_max);
  return theorem(m.horizon, m.discount, m.r_min, m.r_max);
}

double LipschitzSchedule::operator()(int tau) const {
  if (tau < 0 || tau >= static_cast<int>(lambda_.size())) return 0.0;
  return lambda_[tau];
}

double LipschitzSchedule::lambda_inf() const {
  if (mode_ == LipschitzMode::kTheorem && gamma_ < 1.0) return 0.5 * delta_r() / (1.0 - gamma_);
  double mx = 0.0;
  for (double l : lambda_) mx = std::max(mx, l);
  return mx;
}

std::vector<std::vector<double>> cooperative_mdp_values(const PosgModel& m) {
  const int S = m.num_states(), H = m.horizon;
  std::vector<std::vector<double>> V(H + 1, std::vector<double>(S, 0.0));
  for (int t = H - 1; t >= 0; --t)
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a1 = 0; a1 < m.num_actions(0); ++a1)
        for (int a2 = 0; a2 < m.num_actions(1); ++a2) {
          double q = m.r(s, a1, a2);
          double cont = 0.0;
          for (int s2 = 0; s2 < S; ++s2) {
            double ps = 0.0;
            for (int z1 = 0; z1 < m.num_obs(0); ++z1)
              for (int z2 = 0; z2 < m.num_obs(1); ++z2) ps += m.p(s, a1, a2, s2, z1, z2);
            cont += ps * V[t + 1][s2];
          }
          best = std::max(best, q + m.discount * cont);
        }
      V[t][s] = best;
    }
  return V;
}

DecisionRule complete_rule(const PosgModel& m, const DecisionRule& rule, const std::vector<Hist>& histories) {
  DecisionRule out;
  out.player = rule.player;
  const int A = m.num_actions(rule.player);
  for (Hist h : histories) {
    auto* row = rule.find(h);
    out.rows[h] = row ? *row : std::vector<double>(A, 1.0 / A);
  }
  return out;
}

std::vector<Hist> opponent_histories(const Conditional& c) {
  std::set<Hist> s;
  for (const auto& [own, row] : c.rows)
    for (const auto& ce : row) s.insert(ce.other);
  return {s.begin(), s.end()};
}

OneSidedBound::OneSidedBound(PosgModel model, BoundOptions options)
    : model_(std::move(model)), options_(options) {
  schedule_ = LipschitzSchedule::for_model(model_, options_.lipschitz);
  const int H = model_.horizon;
  v_live_.resize(H);
  w_live_.resize(H);
  init_w_.assign(H, -1);
  updates_since_prune_.assign(H, 0);
  mdp_ = cooperative_mdp_values(model_);
  init_table_.resize(H + 1);
}

double OneSidedBound::v_max(int tau) const {
  if (tau >= model_.horizon) return 0.0;
  const double h = horizon_factor(model_.horizon, tau, model_.discount);
  return h * model_.r_max;
}

void OneSidedBound::initialize() {
  const PosgModel& m = model_;
  const int H = m.horizon;
  std::vector<OccupancyState> traj;
  OccupancyState sigma = initial_occupancy(m);
  for (int t = 0; t < H; ++t) {
    traj.push_back(sigma);
    if (t + 1 < H)
      sigma = transition(m, sigma, uniform_rule(m, 0, support(sigma, 0)), uniform_rule(m, 1, support(sigma, 1)));
  }
  std::vector<MarginalConditional> mcs;
  for (const auto& s : traj) mcs.push_back(decompose(s, 0));

  // Best-response values of player 1 against the uniform opponent, for every own history.
  const DecisionRule empty_rule{1, {}};
  for (int t = H - 1; t >= 0; --t) {
    for (const auto& [own, row] : mcs[t].conditional.rows) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a1 = 0; a1 < m.num_actions(0); ++a1) {
        double q = row_reward(m, row, empty_rule, a1);
        if (t + 1 < H) {
          auto kids = child_rows(m, row, empty_rule, a1);
          for (int z1 = 0; z1 < m.num_obs(0); ++z1) {
            if (kids[z1].prob <= 0.0) continue;
            auto it = init_table_[t + 1].find(extend(m, 0, own, a1, z1));
            q += m.discount * kids[z1].prob * (it == init_table_[t + 1].end() ? v_max(t + 1) : it->second);
          }
        }
        best = std::max(best, q);
      }
      init_table_[t][own] = best;
    }
  }

  std::vector<int> wids(H, -1);
  for (int t = H - 1; t >= 0; --t) {
    WTuple w;
    w.tau = t;
    w.cond = mcs[t].conditional;
    w.rule = uniform_rule(m, 1, support(traj[t], 1));
    if (t + 1 < H) {
      Payload p;
      p.ids = {wids[t + 1]};
      p.probs = {1.0};
      for (const auto& [h, v] : init_table_[t + 1]) p.nu[h] = std::min(v, v_max(t + 1));
      w.payload = std::move(p);
      w.next_cond = transition_conditional(m, *w.cond, w.rule);
    }
    wids[t] = add_w(std::move(w));
    init_w_[t] = wids[t];

    VTuple v;
    v.tau = t;
    v.cond = mcs[t].conditional;
    v.payload.ids = {wids[t]};
    v.payload.probs = {1.0};
    for (const auto& [h, val] : init_table_[t]) v.payload.nu[h] = std::min(val, v_max(t));
    add_v(std::move(v));
  }
}

int OneSidedBound::add_v(VTuple v) {
  v.id = static_cast<int>(vstore_.size());
  v_live_[v.tau].push_back(v.id);
  vstore_.push_back(std::move(v));
  return vstore_.back().id;
}

int OneSidedBound::add_w(WTuple w) {
  w.id = static_cast<int>(wstore_.size());
  w_live_[w.tau].push_back(w.id);
  wstore_.push_back(std::move(w));
  return wstore_.back().id;
}

int OneSidedBound::add_terminal_w(const Conditional& cond, const DecisionRule& rule) {
  WTuple w;
  w.tau = cond.tau;
  w.cond = cond;
  w.rule = complete_rule(model_, rule, opponent_histories(cond));
  return add_w(std::move(w));
}

double OneSidedBound::missing_component(int tau, Hist h, const CondRow* row) const {
  if (tau >= model_.horizon) return 0.0;
  if (options_.heuristic == Heuristic::kInit) {
    auto it = init_table_[tau].find(h);
    return it == init_table_[tau].end() ? v_max(tau) : std::min(it->second, v_max(tau));
  }
  if (!row || row->empty()) return v_max(tau);
  double v = 0.0;
  for (const auto& ce : *row)
    for (int s = 0; s < model_.num_states(); ++s) v += ce.p * ce.belief[s] * mdp_[tau][s];
  return std::min(v, v_max(tau));
}

double OneSidedBound::surface_value(const VTuple& v, const MarginalConditional& mc) const {
  const double lambda = schedule_(mc.tau);
  const double vmax = v_max(mc.tau);
  double total = 0.0;
  for (const auto& [own, mass] : mc.marginal) {
    const CondRow* cur = mc.conditional.find(own);
    auto it = v.payload.nu.find(own);
    const CondRow* ref = v.cond.find(own);
    double term;
    if (it != v.payload.nu.end() && ref)
      term = std::min(it->second + lambda * row_distance(*cur, *ref), vmax);
    else
      term = missing_component(mc.tau, own, cur);
    total += mass * term;
  }
  return total;
}

OneSidedBound::Eval OneSidedBound::eval(const MarginalConditional& mc) const {
  Eval best{std::numeric_limits<double>::infinity(), -1};
  if (mc.tau >= model_.horizon) return {0.0, -1};
  for (int id : v_live_[mc.tau]) {
    const double v = surface_value(vstore_[id], mc);
    if (v < best.value) best = {v, id};
  }
  return best;
}

OneSidedBound::Eval OneSidedBound::eval(const OccupancyState& sigma) const {
  return eval(decompose(sigma, 0));
}

double OneSidedBound::column_entry_continuation(int tau, const WTuple& w, Hist child, double mass,
                                                const CondRow* current_row) const {
  const int t1 = tau + 1;
  if (w.payload && w.next_cond) {
    auto it = w.payload->nu.find(child);
    const CondRow* ref = w.next_cond->find(child);
    if (it != w.payload->nu.end() && ref)
      return mass * std::min(it->second + schedule_(t1) * row_distance(*current_row, *ref), v_max(t1));
  }
  return mass * missing_component(t1, child, current_row);
}

StageGameMatrix OneSidedBound::build_matrix(const OccupancyState& sigma) const {
  const PosgModel& m = model_;
  const int tau = sigma.tau;
  const bool last = tau + 1 >= m.horizon;
  const int A1 = m.num_actions(0);
  MarginalConditional mc = decompose(sigma, 0);
  StageGameMatrix M;
  M.tau = tau;
  M.num_actions = A1;
  for (const auto& [own, mass] : mc.marginal) {
    M.histories.push_back(own);
    M.marginal.push_back(mass);
  }
  const auto& cols = w_live_[tau];
  M.resize(M.num_rows(), static_cast<int>(cols.size()));
  const auto others = support(sigma, 1);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const WTuple& w = wstore_[cols[c]];
    M.columns[c] = w.id;
    const DecisionRule rule = complete_rule(m, w.rule, others);
    for (std::size_t h = 0; h < M.histories.size(); ++h) {
      const Hist own = M.histories[h];
      const CondRow& row = *mc.conditional.find(own);
      const double mass = M.marginal[h];
      for (int a1 = 0; a1 < A1; ++a1) {
        double entry = mass * row_reward(m, row, rule, a1);
        if (!last) {
          auto kids = child_rows(m, row, rule, a1);
          double cont = 0.0;
          for (int z1 = 0; z1 < m.num_obs(0); ++z1) {
            if (kids[z1].prob <= 0.0) continue;
            cont += column_entry_continuation(tau, w, extend(m, 0, own, a1, z1), kids[z1].prob, &kids[z1].row);
          }
          entry += m.discount * mass * cont;
        }
        M.at(static_cast<int>(h) * A1 + a1, static_cast<int>(c)) = entry;
      }
    }
  }
  return M;
}

OneSidedBound::UpdateResult OneSidedBound::update(const OccupancyState& sigma, const Conditional* prev_cond,
                                                  const DecisionRule* prev_rule) {
  return update_from(sigma, build_matrix(sigma), prev_cond, prev_rule);
}

OneSidedBound::UpdateResult OneSidedBound::update_from(const OccupancyState& sigma, const StageGameMatrix& M,
                                                       const Conditional* prev_cond,
                                                       const DecisionRule* prev_rule) {
  const int tau = sigma.tau;
  UpdateResult res;
  res.dual = solve_dual(M);
  Payload p;
  double s = 0.0;
  for (int c = 0; c < M.num_cols(); ++c)
    if (res.dual.delta[c] > kProbEps) {
      p.ids.push_back(M.columns[c]);
      p.probs.push_back(res.dual.delta[c]);
      s += res.dual.delta[c];
    }
  for (double& q : p.probs) q /= s;
  for (std::size_t h = 0; h < M.histories.size(); ++h)
    p.nu[M.histories[h]] = std::min(res.dual.nu[h], v_max(tau));

  if (prev_cond && prev_rule && tau >= 1) {
    WTuple w;
    w.tau = tau - 1;
    w.cond = *prev_cond;
    w.rule = complete_rule(model_, *prev_rule, opponent_histories(*prev_cond));
    w.payload = p;
    w.next_cond = transition_conditional(model_, *w.cond, w.rule);
    res.w_id = add_w(std::move(w));
  }
  VTuple v;
  v.tau = tau;
  v.cond = decompose(sigma, 0).conditional;
  v.payload = std::move(p);
  res.v_id = add_v(std::move(v));

  if (options_.prune_period > 0 && ++updates_since_prune_[tau] >= options_.prune_period) {
    updates_since_prune_[tau] = 0;
    prune_v(tau);
  }
  return res;
}

bool OneSidedBound::dominated(const VTuple& k, int tau) const {
  const double lambda = schedule_(tau);
  const double vmax = v_max(tau);
  std::vector<Hist> hs;
  for (const auto& [h, v] : k.payload.nu) hs.push_back(h);
  std::vector<std::vector<double>> coef;  // per dominator, c_j - c_k per history
  for (int jid : v_live_[tau]) {
    if (jid == k.id) continue;
    const VTuple& j = vstore_[jid];
    bool subset = true;
    for (const auto& [h, v] : j.payload.nu)
      if (!k.payload.nu.count(h)) {
        subset = false;
        break;
      }
    if (!subset) continue;
    std::vector<double> c(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const CondRow* own_row = k.cond.find(hs[i]);
      auto it = j.payload.nu.find(hs[i]);
      const CondRow* jr = j.cond.find(hs[i]);
      double cj = (it != j.payload.nu.end() && jr)
                      ? std::min(it->second + lambda * row_distance(*own_row, *jr), vmax)
                      : missing_component(tau, hs[i], own_row);
      c[i] = cj - k.payload.nu.at(hs[i]);
    }
    coef.push_back(std::move(c));
  }
  if (coef.empty()) return false;
  // Fast path: one dominator everywhere below.
  for (const auto& c : coef)
    if (*std::max_element(c.begin(), c.end()) <= 1e-12) return true;
  const int n = static_cast<int>(hs.size());
  LpProblem P(n + 1);
  P.objective[n] = 1.0;
  P.free_var[n] = true;
  for (const auto& c : coef) {
    auto& row = P.add_row(RowType::kLe, 0.0);
    for (int i = 0; i < n; ++i) row.coefs[i] = -c[i];
    row.coefs[n] = 1.0;
  }
  auto& simplex = P.add_row(RowType::kEq, 1.0);
  for (int i = 0; i < n; ++i) simplex.coefs[i] = 1.0;
  LpResult r = lp_solve(P);
  return r.status == LpStatus::kOptimal && r.objective <= 1e-12;
}

int OneSidedBound::prune_v(int tau) {
  int removed = 0;
  auto& live = v_live_[tau];
  for (std::size_t i = 0; i < live.size();) {
    if (live.size() > 1 && dominated(vstore_[live[i]], tau)) {
      live.erase(live.begin() + static_cast<long>(i));
      ++removed;
    } else {
      ++i;
    }
  }
  return removed;
}

BoundSet::BoundSet(const PosgModel& model, BoundOptions options)
    : upper_(model, options), lower_(swap_players(model), options) {}

void BoundSet::initialize() {
  upper_.initialize();
  lower_.initialize();
}

}  // namespace zsposg
