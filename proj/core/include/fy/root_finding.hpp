#pragma once

#include <functional>

namespace fy {

struct RootResult {
  double root = 0.0;
  double f_at_root = 0.0;
  int iterations = 0;
  long evals = 0;
  bool converged = false;
};

using ScalarFn = std::function<double(double)>;

/// Bisection on [lo, hi]. Stops when |f| <= ftol or max_iter is reached.
/// flo/fhi are the (already computed) endpoint values; the endpoints must
/// bracket a sign change (weak inequalities allowed).
RootResult bisect_root(const ScalarFn& f, double lo, double hi, double flo, double fhi,
                       double ftol, int max_iter, long max_evals = 0);

/// Brent's method (inverse quadratic / secant / bisection) on the same
/// bracket and stopping rule as bisect_root.
RootResult brent_root(const ScalarFn& f, double lo, double hi, double flo, double fhi,
                      double ftol, int max_iter, long max_evals = 0);

}  // namespace fy
