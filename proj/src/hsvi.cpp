#include "zsposg/hsvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zsposg {

std::string to_string(SolveStatus s) { return s == SolveStatus::kConverged ? "converged" : "budget_exhausted"; }

double thr(double epsilon, double rho, const LipschitzSchedule& schedule, int tau) {
  const double g = schedule.gamma();
  if (tau == 0) return epsilon;
  if (g <= 0.0) return std::numeric_limits<double>::infinity();
  double v = epsilon * std::pow(g, -tau);
  for (int i = 1; i <= tau; ++i) v -= 2.0 * rho * schedule(tau - i) * std::pow(g, -i);
  return v;
}

double rho_max(double epsilon, double gamma, double lambda_inf, double delta_r, int horizon) {
  if (gamma < 1.0) {
    if (lambda_inf <= 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 - gamma) * epsilon / (2.0 * lambda_inf);
  }
  if (delta_r <= 0.0) return std::numeric_limits<double>::infinity();
  return epsilon / (delta_r * (horizon + 1.0) * horizon);
}

double rho_max(double epsilon, const LipschitzSchedule& schedule) {
  return rho_max(epsilon, schedule.gamma(), schedule.lambda_inf(), schedule.delta_r(), schedule.horizon());
}

double rho_supremum(double epsilon, const LipschitzSchedule& schedule) {
  const double g = schedule.gamma();
  double sup = std::numeric_limits<double>::infinity();
  if (g <= 0.0) return sup;
  for (int tau = 1; tau < schedule.horizon(); ++tau) {
    double s = 0.0;
    for (int i = 1; i <= tau; ++i) s += 2.0 * schedule(tau - i) * std::pow(g, -i);
    if (s > 0.0) sup = std::min(sup, epsilon * std::pow(g, -tau) / s);
  }
  return sup;
}

double auto_rho(double epsilon, const LipschitzSchedule& schedule) {
  double r = std::min(rho_max(epsilon, schedule), rho_supremum(epsilon, schedule));
  return std::isfinite(r) ? r / 2.0 : 0.0;
}

int t_max(double epsilon, double rho, double lambda_inf, double W, double gamma, int horizon) {
  if (gamma >= 1.0) return horizon;
  const double c = 2.0 * rho * lambda_inf / (1.0 - gamma);
  const double ratio = (epsilon - c) / (W - c);
  if (ratio >= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log(ratio) / std::log(gamma) - 1e-12));
}

HsviSolver::HsviSolver(const PosgModel& model, SolverConfig config)
    : model_(model),
      config_(std::move(config)),
      bounds_(model, BoundOptions{config_.lipschitz, config_.heuristic, config_.prune_period}) {
  const auto& sched = bounds_.upper().schedule();
  if (config_.rho) {
    rho_ = *config_.rho;
    const double sup = std::min(rho_max(config_.epsilon, sched), rho_supremum(config_.epsilon, sched));
    if (rho_ < 0.0 || (std::isfinite(sup) && rho_ >= sup))
      throw std::invalid_argument("rho must lie in [0, " + std::to_string(sup) + ")");
  } else {
    rho_ = auto_rho(config_.epsilon, sched);
  }
  for (int t = 0; t < model_.horizon; ++t)
    if (threshold(t) <= 0.0) throw std::invalid_argument("non-positive threshold at depth " + std::to_string(t));
  bounds_.initialize();
  root_ = initial_occupancy(model_);
}

void HsviSolver::update(const OccupancyState& sigma, const Context* ctx) {
  bounds_.upper().update(sigma, ctx ? &ctx->upper_cond : nullptr, ctx ? &ctx->b2 : nullptr);
  DecisionRule b1 = ctx ? with_player(ctx->b1, 1) : DecisionRule{};
  bounds_.lower().update(swap_occupancy(sigma), ctx ? &ctx->lower_cond : nullptr, ctx ? &b1 : nullptr);
}

int HsviSolver::explore(const OccupancyState& sigma, const Context* ctx) {
  const int tau = sigma.tau;
  const double gap = bounds_.eval_upper(sigma) - bounds_.eval_lower(sigma);
  if (gap <= threshold(tau)) return tau;
  int reached = tau + 1;
  if (tau + 1 < model_.horizon) {
    const OccupancyState swapped = swap_occupancy(sigma);
    StageSolution up = solve_primal(bounds_.upper().build_matrix(sigma), 0);
    StageSolution lo = solve_primal(bounds_.lower().build_matrix(swapped), 0);
    Context next;
    next.upper_cond = decompose(sigma, 0).conditional;
    next.lower_cond = decompose(swapped, 0).conditional;
    next.b1 = up.rule;
    next.b2 = with_player(lo.rule, 1);
    OccupancyState child = transition(model_, sigma, next.b1, next.b2);
    reached = explore(child, &next);
  } else {
    TerminalSolution ne = solve_terminal_game(model_, sigma);
    bounds_.upper().add_terminal_w(decompose(sigma, 0).conditional, ne.b2);
    bounds_.lower().add_terminal_w(decompose(swap_occupancy(sigma), 0).conditional, with_player(ne.b1, 1));
  }
  update(sigma, ctx);
  return reached;
}

int HsviSolver::iterate() { return explore(root_, nullptr); }

SolveResult HsviSolver::solve() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(clock::now() - start).count(); };
  const double target = config_.target_gap.value_or(config_.epsilon);
  SolveResult res;
  res.rho = rho_;
  auto record = [&](long it, int len) {
    TraceRecord r;
    r.iteration = it;
    r.elapsed_ms = elapsed_ms();
    r.ub0 = bounds_.eval_upper(root_);
    r.lb0 = bounds_.eval_lower(root_);
    r.gap = r.ub0 - r.lb0;
    r.trajectory_length = len;
    for (int t = 0; t < model_.horizon; ++t) {
      r.bag_v_sizes.push_back(static_cast<int>(bounds_.upper().live_v(t).size() + bounds_.lower().live_v(t).size()));
      r.bag_w_sizes.push_back(static_cast<int>(bounds_.upper().live_w(t).size() + bounds_.lower().live_w(t).size()));
    }
    if (config_.on_iteration) config_.on_iteration(r);
    res.trace.push_back(r);
    return r;
  };
  TraceRecord last = record(0, 0);
  long it = 0;
  while (last.gap > target) {
    if (it >= config_.max_iterations || elapsed_ms() / 1000.0 >= config_.max_seconds) break;
    const int len = iterate();
    ++it;
    last = record(it, len);
  }
  res.status = last.gap <= target ? SolveStatus::kConverged : SolveStatus::kBudgetExhausted;
  res.ub = last.ub0;
  res.lb = last.lb0;
  res.gap = last.gap;
  res.iterations = it;
  res.upper_root = bounds_.argmin_upper(root_).id;
  res.lower_root = bounds_.argmax_lower(root_).id;
  res.elapsed_ms = elapsed_ms();
  return res;
}

}  // namespace zsposg
