#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

namespace zsposg {

// Point x = x_inf + t (x_sup - x_inf) of the unit simplex inside the box, if any.
std::optional<std::vector<double>> simplex_cube_intersection(const std::vector<double>& x_inf,
                                                             const std::vector<double>& x_sup);

// Product of unit simplexes; distance is sum_j weight_j * ||x_j - y_j||_1.
struct ProductDomain {
  std::vector<int> dims;
  std::vector<double> weights;
};

using ProductPoint = std::vector<std::vector<double>>;

struct DooOptions {
  double lambda = 1.0;
  double epsilon = 1e-3;
  long max_evaluations = 2000000;
  int dim_cap = 4;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Stop as soon as the best value reaches this.
  std::optional<double> stop_at;
  // Certified lower bound on the maximum supplied by the caller; when set,
  // convergence is tested against it instead of the best value.
  std::function<double()> certified_lower;
};

struct DooResult {
  ProductPoint x;
  double value = 0.0;  // best evaluated f (a lower bound on the maximum)
  double upper = 0.0;  // certified upper bound on the maximum
  long evaluations = 0;
  long iterations = 0;
  bool converged = false;
};

DooResult doo_maximize(const std::function<double(const ProductPoint&)>& f, const ProductDomain& domain,
                       const DooOptions& options);
// Minimization through negation; value/upper become best/lower bound.
struct DooMinResult {
  ProductPoint x;
  double value = 0.0;  // best evaluated f (an upper bound on the minimum)
  double lower = 0.0;  // certified lower bound on the minimum
  long evaluations = 0;
  bool converged = false;
};
DooMinResult doo_minimize(const std::function<double(const ProductPoint&)>& f, const ProductDomain& domain,
                          const DooOptions& options);

struct BiDooResult {
  ProductPoint x;        // outer maximizer
  ProductPoint y;        // inner minimizer at x
  double value = 0.0;    // estimate of max_x min_y f
  double lower = 0.0;    // certified lower bound of max_x min_y f
  double upper = 0.0;    // certified upper bound of max_x min_y f
  long evaluations = 0;
  bool converged = false;
};

// max_x min_y f(x, y) with outer precision eps1 and inner precision eps2.
// Inner runs stop early once they cannot beat the certified lower bound;
// x maximizes the certified lower bound.
BiDooResult bidoo(const std::function<double(const ProductPoint&, const ProductPoint&)>& f,
                  const ProductDomain& x_domain, const ProductDomain& y_domain, double lambda, double eps1,
                  double eps2, const DooOptions& base = {});

// Radius bound of a box intersected with the unit simplex (1-norm).
double box_simplex_radius(const std::vector<double>& x_inf, const std::vector<double>& x_sup);

}  // namespace zsposg
