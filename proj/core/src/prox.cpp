#include "fy/prox.hpp"

#include <cmath>
#include <limits>

#include "pg_solver.hpp"
#include "separable_solver.hpp"

namespace fy {

ProxSpec ProxSpec::cost_hinge(Vector c) {
  detail::require_finite(c, "cost vector");
  ProxSpec spec(ProxKind::CostHinge);
  spec.cost_ = std::move(c);
  return spec;
}

double wright_omega(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("wright_omega needs finite input");
  if (z < -50.0) return std::exp(z);  // omega ~ e^z, residual ~ e^z itself
  if (z > 1e150) return z - std::log(z);

  double lo, hi;
  if (z >= 1.0) {
    lo = 1.0;
    hi = z > 1.0 ? z : 1.0 + 1e-15;
  } else {
    lo = std::exp(z - 1.0);
    hi = 1.0;
  }
  double w = z >= 1.0 ? z : std::min(std::exp(z), hi);
  if (w < lo || w > hi) w = 0.5 * (lo + hi);
  const double target = 1e-13 * std::max(1.0, std::abs(z));
  for (int it = 0; it < 200; ++it) {
    const double f = w + std::log(w) - z;
    if (std::abs(f) <= target) return w;
    if (f > 0.0) hi = std::min(hi, w);
    else lo = std::max(lo, w);
    double w_next = w - f * w / (w + 1.0);
    if (!(w_next > lo && w_next < hi)) w_next = 0.5 * (lo + hi);  // bisection fallback
    if (w_next == w) return w;
    w = w_next;
  }
  return w;
}

namespace {

// g(t) = t^2/2 + t log t / sigma  (negative Shannon scaled into the prox)
struct ShannonProxG {
  double sigma;
  double log_sigma;
  double d0() const { return -std::numeric_limits<double>::infinity(); }
  double d1() const { return 1.0 + 1.0 / sigma; }
  double d_at(double t) const { return t + (1.0 + std::log(t)) / sigma; }
  double inv(double x) const { return wright_omega(sigma * x - 1.0 + log_sigma) / sigma; }
  double inv_deriv(double x) const {
    const double w = wright_omega(sigma * x - 1.0 + log_sigma);
    return w / (1.0 + w);
  }
};

// g(t) = t^2/2 + 4 t^{3/2} / (3 sigma), the 1.5-Tsallis prox generator (its
// linear term is constant on the simplex and is dropped).
struct Tsallis15ProxG {
  double sigma;
  double d0() const { return 0.0; }
  double d1() const { return 1.0 + 2.0 / sigma; }
  double d_at(double t) const { return t + 2.0 * std::sqrt(t) / sigma; }
  double inv(double x) const {
    return x + 2.0 / (sigma * sigma) * (1.0 - std::sqrt(1.0 + sigma * sigma * x));
  }
  double inv_deriv(double x) const { return 1.0 - 1.0 / std::sqrt(1.0 + sigma * sigma * x); }
};

template <class G>
Vector entropic_prox(const G& g, const Vector& eta, const SolverConfig& cfg) {
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 100;
  detail::SepResult sep = detail::solve_separable_simplex(
      g, eta, cfg.method == SolveMethod::Brent, cfg.tol, max_iter);
  if (!sep.converged) throw NoConvergence("entropic prox root finding did not converge");
  const double s = sep.p.sum();
  if (s > 0.0) sep.p /= s;
  return sep.p;
}

}  // namespace

Vector prox(const ProxSpec& spec, double tau, const Vector& eta, const SolverConfig& cfg) {
  detail::require_finite(eta, "prox input");
  if (tau < 0.0) throw std::invalid_argument("prox needs tau >= 0");
  if (tau == 0.0) {
    // prox of 0 * Omega: projection onto dom(Omega)
    if (spec.kind() == ProxKind::Squared) return eta;
    return detail::project_simplex_raw(eta);
  }
  switch (spec.kind()) {
    case ProxKind::Squared:
      return eta / (tau + 1.0);
    case ProxKind::Perceptron:
      return detail::project_simplex_raw(eta);
    case ProxKind::Sparsemax:
      return detail::project_simplex_raw(eta / (tau + 1.0));
    case ProxKind::CostHinge: {
      if (spec.cost().size() != eta.size()) {
        throw std::invalid_argument("cost vector length does not match prox input");
      }
      return detail::project_simplex_raw(eta + tau * spec.cost());
    }
    case ProxKind::NegShannon: {
      const double sigma = 1.0 / tau;
      return entropic_prox(ShannonProxG{sigma, std::log(sigma)}, eta, cfg);
    }
    case ProxKind::NegTsallis15:
      return entropic_prox(Tsallis15ProxG{1.0 / tau}, eta, cfg);
  }
  throw std::logic_error("unreachable prox kind");
}

namespace {

// Gradient descent for the inner problem of the Moreau route:
//   min_theta 1/2 ||theta - x||^2 + (1/tau) Omega*(theta),
// whose gradient is theta - x + (1/tau) yhat(theta). The objective is
// 1-strongly convex and (1 + 1/tau)-smooth when yhat is 1-Lipschitz.
Vector conjugate_prox_gd(const std::function<Vector(const Vector&)>& yhat, double tau,
                         const Vector& x, int max_iter) {
  Vector theta = x;
  const double step = 1.0 / (1.0 + 1.0 / tau);
  double gnorm = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector g = theta - x + yhat(theta) / tau;
    gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= 1e-12) return theta;
    theta -= step * g;
  }
  if (gnorm > 1e-8) {
    throw NoConvergence("moreau_decompose inner gradient descent stalled at |g| = " +
                        std::to_string(gnorm));
  }
  return theta;
}

}  // namespace

Vector moreau_decompose(const ProxSpec& spec, double tau, const Vector& eta,
                        const SolverConfig& cfg) {
  detail::require_finite(eta, "prox input");
  if (!(tau > 0.0)) throw std::invalid_argument("moreau_decompose needs tau > 0");
  const Vector x = eta / tau;
  switch (spec.kind()) {
    case ProxKind::Perceptron: {
      // Omega* is the simplex support function; prox_{t sigma_C}(x) =
      // x - t proj_C(x / t) with t = 1/tau.
      const Vector inner = x - detail::project_simplex_raw(tau * x) / tau;
      return eta - tau * inner;
    }
    case ProxKind::CostHinge: {
      if (spec.cost().size() != eta.size()) {
        throw std::invalid_argument("cost vector length does not match prox input");
      }
      const Vector inner = x - detail::project_simplex_raw(tau * x + tau * spec.cost()) / tau;
      return eta - tau * inner;
    }
    case ProxKind::Squared: {
      auto yhat = [](const Vector& t) { return t; };
      return eta - tau * conjugate_prox_gd(yhat, tau, x, 100000);
    }
    case ProxKind::Sparsemax: {
      auto yhat = [](const Vector& t) { return detail::project_simplex_raw(t); };
      return eta - tau * conjugate_prox_gd(yhat, tau, x, 100000);
    }
    case ProxKind::NegShannon: {
      auto yhat = [](const Vector& t) { return softmax(t).vec(); };
      return eta - tau * conjugate_prox_gd(yhat, tau, x, 100000);
    }
    case ProxKind::NegTsallis15: {
      SolverConfig inner_cfg = cfg;
      inner_cfg.tol = std::min(cfg.tol, 1e-12);
      auto yhat = [inner_cfg](const Vector& t) {
        return entmax_tsallis(t, 1.5, inner_cfg).p.vec();
      };
      return eta - tau * conjugate_prox_gd(yhat, tau, x, 100000);
    }
  }
  throw std::logic_error("unreachable prox kind");
}

}  // namespace fy
