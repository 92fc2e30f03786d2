#include "fy/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fy {

namespace {

RootResult endpoint_result(double x, double fx, int iters, long evals, double ftol) {
  RootResult r;
  r.root = x;
  r.f_at_root = fx;
  r.iterations = iters;
  r.evals = evals;
  r.converged = std::abs(fx) <= ftol;
  return r;
}

}  // namespace

RootResult bisect_root(const ScalarFn& f, double lo, double hi, double flo, double fhi,
                       double ftol, int max_iter, long max_evals) {
  if (std::abs(flo) <= ftol) return endpoint_result(lo, flo, 0, 0, ftol);
  if (std::abs(fhi) <= ftol) return endpoint_result(hi, fhi, 0, 0, ftol);
  if (flo * fhi > 0.0) {
    // no sign change: report the better endpoint, not converged
    return std::abs(flo) < std::abs(fhi) ? endpoint_result(lo, flo, 0, 0, ftol)
                                         : endpoint_result(hi, fhi, 0, 0, ftol);
  }
  RootResult r;
  double a = lo, b = hi, fa = flo;
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    if (max_evals > 0 && r.evals >= max_evals) break;
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    ++r.evals;
    r.root = mid;
    r.f_at_root = fm;
    if (std::abs(fm) <= ftol) {
      r.converged = true;
      return r;
    }
    if ((fa > 0.0) == (fm > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b))) {
      return r;  // bracket exhausted at machine precision
    }
  }
  return r;
}

RootResult brent_root(const ScalarFn& f, double lo, double hi, double flo, double fhi,
                      double ftol, int max_iter, long max_evals) {
  if (std::abs(flo) <= ftol) return endpoint_result(lo, flo, 0, 0, ftol);
  if (std::abs(fhi) <= ftol) return endpoint_result(hi, fhi, 0, 0, ftol);
  if (flo * fhi > 0.0) {
    return std::abs(flo) < std::abs(fhi) ? endpoint_result(lo, flo, 0, 0, ftol)
                                         : endpoint_result(hi, fhi, 0, 0, ftol);
  }
  RootResult r;
  double a = lo, b = hi, c = hi;
  double fa = flo, fb = fhi, fc = fhi;
  double d = 0.0, e = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    r.root = b;
    r.f_at_root = fb;
    if (std::abs(fb) <= ftol) {
      r.converged = true;
      return r;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * eps;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return r;
    if (max_evals > 0 && r.evals >= max_evals) return r;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double rr = fb / fc;
        p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > tol1) {
      b += d;
    } else {
      b += xm >= 0.0 ? tol1 : -tol1;
    }
    fb = f(b);
    ++r.evals;
  }
  r.root = b;
  r.f_at_root = fb;
  r.converged = std::abs(fb) <= ftol;
  return r;
}

}  // namespace fy
