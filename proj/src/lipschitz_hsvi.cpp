#include "zsposg/lipschitz_hsvi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zsposg {

DecisionRule rule_from_point(int player, const std::vector<Hist>& histories, const ProductPoint& x) {
  DecisionRule r;
  r.player = player;
  for (std::size_t i = 0; i < histories.size(); ++i) {
    std::vector<double> row = x[i];
    double s = 0.0;
    for (double& v : row) s += v = std::max(0.0, v);
    for (double& v : row) v /= s;
    r.rows[histories[i]] = std::move(row);
  }
  return r;
}

ConeBound::ConeBound(PosgModel model, LipschitzMode mode) : model_(std::move(model)) {
  schedule_ = LipschitzSchedule::for_model(model_, mode);
  mdp_ = cooperative_mdp_values(model_);
  live_.resize(model_.horizon);
}

double ConeBound::initial(const OccupancyState& sigma) const {
  if (sigma.tau >= model_.horizon) return 0.0;
  double v = 0.0;
  for (const auto& e : sigma.entries)
    for (int s = 0; s < model_.num_states(); ++s) v += e.p * e.belief[s] * mdp_[sigma.tau][s];
  return v;
}

ConeBound::Eval ConeBound::eval(const OccupancyState& sigma) const {
  if (sigma.tau >= model_.horizon) return {0.0, -1};
  Eval best{initial(sigma), -1};
  const double lambda = schedule_(sigma.tau);
  for (int id : live_[sigma.tau]) {
    const Cone& c = store_[id];
    const double v = c.summit + lambda * distance_l1(c.anchor, sigma);
    if (v < best.value) best = {v, id};
  }
  return best;
}

double eval_cone_bound(const ConeBound& bound, const OccupancyState& sigma) { return bound.eval(sigma).value; }

int ConeBound::add(Cone c) {
  c.id = static_cast<int>(store_.size());
  live_[c.tau].push_back(c.id);
  store_.push_back(std::move(c));
  return store_.back().id;
}

int ConeBound::prune(int tau) {
  int removed = 0;
  auto& live = live_[tau];
  const double lambda = schedule_(tau);
  for (std::size_t i = 0; i < live.size();) {
    const Cone& c = store_[live[i]];
    bool dominated = initial(c.anchor) <= c.summit;
    for (std::size_t j = 0; j < live.size() && !dominated; ++j) {
      if (j == i) continue;
      const Cone& o = store_[live[j]];
      dominated = o.summit + lambda * distance_l1(o.anchor, c.anchor) <= c.summit;
    }
    if (dominated) {
      live.erase(live.begin() + static_cast<long>(i));
      ++removed;
    } else {
      ++i;
    }
  }
  return removed;
}

LocalGameSolution solve_local_game(const ConeBound& bound, const OccupancyState& sigma, double eps1, double eps2,
                                   const DooOptions& base) {
  const PosgModel& m = bound.model();
  const int tau = sigma.tau;
  const bool last = tau + 1 >= m.horizon;
  if (last) {
    // Bilinear without continuation: exact by LP.
    TerminalSolution t = solve_terminal_game(m, sigma);
    return {t.b1, t.b2, t.value, t.value, 0};
  }
  const auto h0 = support(sigma, 0);
  const auto h1 = support(sigma, 1);
  const auto mc0 = decompose(sigma, 0);
  const auto mc1 = decompose(sigma, 1);
  ProductDomain dx, dy;
  for (Hist h : h0) {
    dx.dims.push_back(m.num_actions(0));
    dx.weights.push_back(mc0.marginal.at(h));
  }
  for (Hist h : h1) {
    dy.dims.push_back(m.num_actions(1));
    dy.weights.push_back(mc1.marginal.at(h));
  }
  const double lambda_q = 0.5 * (m.r_max - m.r_min) + m.discount * bound.schedule()(tau + 1);
  auto q = [&](const ProductPoint& x, const ProductPoint& y) {
    const DecisionRule b1 = rule_from_point(0, h0, x);
    const DecisionRule b2 = rule_from_point(1, h1, y);
    double v = expected_reward(m, sigma, b1, b2);
    return v + m.discount * bound.eval(transition(m, sigma, b1, b2)).value;
  };
  BiDooResult r = bidoo(q, dx, dy, lambda_q, eps1, eps2, base);
  LocalGameSolution out;
  out.b1 = rule_from_point(0, h0, r.x);
  out.b2 = rule_from_point(1, h1, r.y);
  out.upper = r.upper;
  out.value = r.value;
  out.evaluations = r.evaluations;
  return out;
}

LipschitzHsviSolver::LipschitzHsviSolver(const PosgModel& model, LcConfig config)
    : model_(model),
      config_(std::move(config)),
      upper_(model, config_.base.lipschitz),
      lower_(swap_players(model), config_.base.lipschitz) {
  for (int p = 0; p < 2; ++p)
    if (model_.num_actions(p) > 4) throw std::invalid_argument("lc variant: more than 4 actions per player");
  const auto& sched = upper_.schedule();
  rho_ = config_.base.rho ? *config_.base.rho : auto_rho(config_.base.epsilon, sched);
  doo_eps_ = config_.doo_epsilon > 0.0 ? config_.doo_epsilon : config_.base.epsilon / (2.0 * model_.horizon);
  root_ = initial_occupancy(model_);
}

double LipschitzHsviSolver::threshold(int tau) const {
  return thr(config_.base.epsilon, rho_, upper_.schedule(), tau);
}

void LipschitzHsviSolver::add_cone(ConeBound& side, const OccupancyState& sigma) {
  DooOptions base;
  base.deadline = deadline_;
  LocalGameSolution sol = solve_local_game(side, sigma, doo_eps_, doo_eps_, base);
  Cone c;
  c.tau = sigma.tau;
  c.anchor = sigma;
  c.summit = sol.upper;
  c.rule = sol.b2;
  if (sigma.tau + 1 < side.model().horizon)
    c.successor = side.eval(transition(side.model(), sigma, sol.b1, sol.b2)).id;
  side.add(std::move(c));
  side.prune(sigma.tau);
}

int LipschitzHsviSolver::explore(const OccupancyState& sigma) {
  const int tau = sigma.tau;
  if (eval_upper(sigma) - eval_lower(sigma) <= threshold(tau)) return tau;
  if (std::chrono::steady_clock::now() >= deadline_) return tau;
  int reached = tau + 1;
  if (tau + 1 < model_.horizon) {
    DooOptions base;
    base.deadline = deadline_;
    LocalGameSolution up = solve_local_game(upper_, sigma, doo_eps_, doo_eps_, base);
    LocalGameSolution lo = solve_local_game(lower_, swap_occupancy(sigma), doo_eps_, doo_eps_, base);
    reached = explore(transition(model_, sigma, up.b1, with_player(lo.b1, 1)));
  }
  add_cone(upper_, sigma);
  add_cone(lower_, swap_occupancy(sigma));
  return reached;
}

int LipschitzHsviSolver::iterate() { return explore(root_); }

SolveResult LipschitzHsviSolver::solve() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  deadline_ = start + std::chrono::duration_cast<clock::duration>(
                          std::chrono::duration<double>(std::min(config_.base.max_seconds, 1e9)));
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(clock::now() - start).count(); };
  const double target = config_.base.target_gap.value_or(config_.base.epsilon);
  SolveResult res;
  res.variant = "lc";
  res.rho = rho_;
  auto record = [&](long it, int len) {
    TraceRecord r;
    r.iteration = it;
    r.elapsed_ms = elapsed_ms();
    r.ub0 = eval_upper(root_);
    r.lb0 = eval_lower(root_);
    r.gap = r.ub0 - r.lb0;
    r.trajectory_length = len;
    for (int t = 0; t < model_.horizon; ++t) {
      r.bag_v_sizes.push_back(static_cast<int>(upper_.live(t).size() + lower_.live(t).size()));
      r.bag_w_sizes.push_back(0);
    }
    if (config_.base.on_iteration) config_.base.on_iteration(r);
    res.trace.push_back(r);
    return r;
  };
  TraceRecord last = record(0, 0);
  long it = 0;
  while (last.gap > target) {
    if (it >= config_.base.max_iterations || clock::now() >= deadline_) break;
    const int len = iterate();
    ++it;
    last = record(it, len);
  }
  res.status = last.gap <= target ? SolveStatus::kConverged : SolveStatus::kBudgetExhausted;
  res.ub = last.ub0;
  res.lb = last.lb0;
  res.gap = last.gap;
  res.iterations = it;
  res.upper_root = upper_.eval(root_).id;
  res.lower_root = lower_.eval(swap_occupancy(root_)).id;
  res.elapsed_ms = elapsed_ms();
  return res;
}

SolveResult lipschitz_hsvi_solve(const PosgModel& model, const LcConfig& config) {
  LipschitzHsviSolver solver(model, config);
  return solver.solve();
}

}  // namespace zsposg
