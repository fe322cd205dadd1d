#include "zsposg/doo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace zsposg {

std::optional<std::vector<double>> simplex_cube_intersection(const std::vector<double>& x_inf,
                                                             const std::vector<double>& x_sup) {
  double lo = 0.0, hi = 0.0, span = 0.0;
  for (std::size_t k = 0; k < x_inf.size(); ++k) {
    lo += x_inf[k];
    hi += x_sup[k];
    span += x_sup[k] - x_inf[k];
  }
  if (lo > 1.0 + 1e-12 || hi < 1.0 - 1e-12) return std::nullopt;
  std::vector<double> x = x_inf;
  if (span > 0.0) {
    const double t = std::clamp((1.0 - lo) / span, 0.0, 1.0);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = x_inf[k] + t * (x_sup[k] - x_inf[k]);
  }
  return x;
}

double box_simplex_radius(const std::vector<double>& x_inf, const std::vector<double>& x_sup) {
  double slo = 0.0, shi = 0.0;
  for (std::size_t k = 0; k < x_inf.size(); ++k) {
    slo += x_inf[k];
    shi += x_sup[k];
  }
  double sum = 0.0, mx = 0.0;
  for (std::size_t k = 0; k < x_inf.size(); ++k) {
    const double lo = std::max(x_inf[k], 1.0 - (shi - x_sup[k]));
    const double hi = std::min(x_sup[k], 1.0 - (slo - x_inf[k]));
    const double c = std::max(0.0, hi - lo);
    sum += c;
    mx = std::max(mx, c);
  }
  return std::min({sum, 2.0 * (sum - mx), 2.0});
}

namespace {

struct Box {
  std::vector<double> lo, hi;
  double radius = 0.0;
};

struct Cell {
  std::vector<Box> boxes;
  ProductPoint x;
  double f = 0.0;
  double radius = 0.0;  // weighted
  double key = 0.0;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.key < b.key; }
};

}  // namespace

DooResult doo_maximize(const std::function<double(const ProductPoint&)>& f, const ProductDomain& domain,
                       const DooOptions& opt) {
  const std::size_t k = domain.dims.size();
  for (int n : domain.dims)
    if (n > opt.dim_cap) throw std::invalid_argument("DOO: simplex dimension " + std::to_string(n) + " exceeds cap");
  DooResult res;
  Cell root;
  for (std::size_t j = 0; j < k; ++j) {
    const int n = domain.dims[j];
    Box b{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), 0.0};
    b.radius = box_simplex_radius(b.lo, b.hi);
    root.x.push_back(*simplex_cube_intersection(b.lo, b.hi));
    root.radius += domain.weights[j] * b.radius;
    root.boxes.push_back(std::move(b));
  }
  root.f = f(root.x);
  root.key = root.f + opt.lambda * root.radius;
  res.evaluations = 1;
  res.value = root.f;
  res.x = root.x;
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
  heap.push(std::move(root));
  while (true) {
    const Cell& top = heap.top();
    res.upper = top.key;
    const double floor = opt.certified_lower ? opt.certified_lower() : res.value;
    if (top.key - floor <= opt.epsilon || (opt.stop_at && res.value >= *opt.stop_at)) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opt.max_evaluations) break;
    if (opt.deadline && std::chrono::steady_clock::now() >= *opt.deadline) break;
    Cell cell = top;
    heap.pop();
    ++res.iterations;
    std::size_t j = 0;
    double widest = -1.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double wr = domain.weights[c] * cell.boxes[c].radius;
      if (wr > widest) {
        widest = wr;
        j = c;
      }
    }
    if (widest <= 0.0) {
      // Exact cell: its bound is its value.
      cell.key = cell.f;
      heap.push(std::move(cell));
      continue;
    }
    const Box& parent = cell.boxes[j];
    const int n = domain.dims[j];
    for (int mask = 0; mask < (1 << n); ++mask) {
      Box b{parent.lo, parent.hi, 0.0};
      for (int d = 0; d < n; ++d) {
        const double mid = 0.5 * (parent.lo[d] + parent.hi[d]);
        if (mask & (1 << d))
          b.lo[d] = mid;
        else
          b.hi[d] = mid;
      }
      auto pt = simplex_cube_intersection(b.lo, b.hi);
      if (!pt) continue;
      b.radius = box_simplex_radius(b.lo, b.hi);
      Cell child;
      child.boxes = cell.boxes;
      child.x = cell.x;
      child.boxes[j] = std::move(b);
      child.x[j] = std::move(*pt);
      child.radius = cell.radius - domain.weights[j] * parent.radius + domain.weights[j] * child.boxes[j].radius;
      child.radius = std::max(0.0, child.radius);
      child.f = f(child.x);
      ++res.evaluations;
      if (child.f > res.value) {
        res.value = child.f;
        res.x = child.x;
      }
      child.key = child.f + opt.lambda * child.radius;
      heap.push(std::move(child));
    }
  }
  return res;
}

DooMinResult doo_minimize(const std::function<double(const ProductPoint&)>& f, const ProductDomain& domain,
                          const DooOptions& options) {
  DooOptions neg = options;
  if (options.stop_at) neg.stop_at = -*options.stop_at;
  if (options.certified_lower) neg.certified_lower = [&options] { return -options.certified_lower(); };
  DooResult r = doo_maximize([&](const ProductPoint& x) { return -f(x); }, domain, neg);
  DooMinResult out;
  out.x = std::move(r.x);
  out.value = -r.value;
  out.lower = -r.upper;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  return out;
}

BiDooResult bidoo(const std::function<double(const ProductPoint&, const ProductPoint&)>& f,
                  const ProductDomain& x_domain, const ProductDomain& y_domain, double lambda, double eps1,
                  double eps2, const DooOptions& base) {
  BiDooResult res;
  res.lower = -std::numeric_limits<double>::infinity();
  bool inner_ok = true;
  DooOptions inner = base;
  inner.lambda = lambda;
  inner.epsilon = eps2;
  inner.certified_lower = nullptr;
  // g(x) is estimated from above by the best inner value; the inner
  // certified lower bound feeds res.lower.
  auto g = [&](const ProductPoint& x) {
    DooOptions in = inner;
    in.stop_at = res.lower + eps1;
    DooMinResult r = doo_minimize([&](const ProductPoint& y) { return f(x, y); }, y_domain, in);
    res.evaluations += r.evaluations;
    if (r.lower > res.lower) {
      res.lower = r.lower;
      res.x = x;
    }
    return r.value;
  };
  DooOptions outer = base;
  outer.lambda = lambda;
  outer.epsilon = eps1 + eps2;
  outer.stop_at.reset();
  outer.certified_lower = [&res] { return res.lower; };
  DooResult o = doo_maximize(g, x_domain, outer);
  res.upper = o.upper;
  if (res.x.empty()) res.x = o.x;
  DooOptions last = inner;
  last.stop_at.reset();
  DooMinResult at = doo_minimize([&](const ProductPoint& y) { return f(res.x, y); }, y_domain, last);
  res.y = at.x;
  res.value = at.value;
  res.lower = std::max(res.lower, at.lower);
  res.evaluations += at.evaluations;
  inner_ok = at.converged;
  res.converged = o.converged && inner_ok;
  return res;
}

}  // namespace zsposg
