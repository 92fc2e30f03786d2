#include "fy/predict.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pg_solver.hpp"
#include "separable_solver.hpp"

namespace fy {

namespace detail {

Vector project_simplex_raw(const Vector& v) {
  const Eigen::Index d = v.size();
  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  Eigen::Index support = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[k] > t) {
      tau = t;
      support = k + 1;
    }
  }
  (void)support;
  Vector p(d);
  for (Eigen::Index i = 0; i < d; ++i) p(i) = std::max(v(i) - tau, 0.0);
  return p;
}

}  // namespace detail

Vector project_simplex(const Vector& v) {
  detail::require_finite(v, "projection input");
  return detail::project_simplex_raw(v);
}

SimplexPoint argmax_predict(const Vector& theta) {
  detail::require_scores(theta);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < theta.size(); ++i) {
    if (theta(i) > theta(best)) best = i;
  }
  return SimplexPoint::vertex(theta.size(), best);
}

double log_sum_exp(const Vector& theta) {
  const double m = theta.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) s += std::exp(theta(i) - m);
  return m + std::log(s);
}

SimplexPoint softmax(const Vector& theta) {
  detail::require_scores(theta);
  const double m = theta.maxCoeff();
  Vector p(theta.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    p(i) = std::exp(theta(i) - m);
    s += p(i);
  }
  return SimplexPoint(p / s);
}

SimplexPoint sparsemax(const Vector& theta) {
  detail::require_scores(theta);
  return SimplexPoint(detail::project_simplex_raw(theta));
}

namespace {

// g(t) = (t^a - t) / (a(a-1)), the negative Tsallis entropy generator.
struct TsallisG {
  double am1;  // alpha - 1
  double d0() const { return -1.0 / am1; }
  double d1() const { return 0.0; }
  double d_at(double t) const { return std::expm1(am1 * std::log(t)) / am1; }
  double inv(double s) const {
    const double base = std::log1p(am1 * s);
    return std::exp(base / am1);
  }
  double inv_deriv(double s) const {
    const double base = std::log1p(am1 * s);
    return std::exp(base * (1.0 / am1 - 1.0));
  }
};

int default_root_iters(const SolverConfig& cfg) { return cfg.max_iter > 0 ? cfg.max_iter : 100; }
int default_pg_iters(const SolverConfig& cfg) { return cfg.max_iter > 0 ? cfg.max_iter : 10000; }

detail::PgProblem entropy_pg_problem(const EntropySpec& spec, const Vector& theta) {
  detail::PgProblem prob;
  prob.value = [spec, theta](const Vector& p) {
    return theta.dot(p) + detail::entropy_value_raw(spec, p);
  };
  prob.grad = [spec, theta](const Vector& p) {
    return Vector(theta + detail::entropy_grad_raw(spec, p, 1e-12));
  };
  // The Gini / squared-2-norm objective has a unit Lipschitz gradient; other
  // families fall back to backtracking.
  if ((spec.family() == EntropyFamily::Tsallis && spec.alpha() == 2.0) ||
      (spec.family() == EntropyFamily::SquaredNorm && spec.q() == 2.0)) {
    prob.lipschitz = 1.0;
  }
  return prob;
}

PredictionResult finish_result(const EntropySpec& spec, const Vector& theta, Vector p,
                               int iterations, long evals) {
  const double s = p.sum();
  if (s > 0.0 && std::abs(s - 1.0) > kFeasTol) p /= s;  // truncated solves (bench mode)
  SimplexPoint point(std::move(p));
  const double conj = theta.dot(point.vec()) + detail::entropy_value_raw(spec, point.vec());
  return PredictionResult{std::move(point), conj, iterations, evals};
}

}  // namespace

namespace detail {

PredictionResult entmax_tsallis_impl(const Vector& theta, double alpha, const SolverConfig& cfg,
                                     std::vector<Vector>* trace, long max_evals) {
  require_scores(theta);
  if (!(alpha > 1.0)) throw std::invalid_argument("entmax_tsallis needs alpha > 1");
  const EntropySpec spec = EntropySpec::tsallis(alpha);
  if (cfg.method == SolveMethod::ProjectedGradient) {
    return predict_generic_impl(spec, theta, cfg, trace, max_evals);
  }
  TsallisG g{alpha - 1.0};
  SepResult sep = solve_separable_simplex(g, theta, cfg.method == SolveMethod::Brent, cfg.tol,
                                          default_root_iters(cfg), trace, max_evals);
  if (!sep.converged && max_evals == 0) {
    throw NoConvergence("entmax_tsallis: |phi(tau)| > tol after max_iter iterations");
  }
  return finish_result(spec, theta, std::move(sep.p), sep.iterations, sep.evals);
}

PredictionResult predict_generic_impl(const EntropySpec& spec, const Vector& theta,
                                      const SolverConfig& cfg, std::vector<Vector>* trace,
                                      long max_evals) {
  require_scores(theta);
  if (!spec.strictly_concave()) {
    throw std::invalid_argument("predict_generic needs a strictly concave entropy, got " +
                                spec.to_string());
  }
  if (spec.family() == EntropyFamily::PairwiseHinge) {
    throw std::invalid_argument("no prediction function is available for pairwise-hinge entropies");
  }
  PgResult pg = pg_ascend_simplex(entropy_pg_problem(spec, theta), theta.size(), cfg.tol,
                                  default_pg_iters(cfg), cfg.step_size, trace, max_evals);
  if (!pg.converged && max_evals == 0) {
    throw NoConvergence("predict_generic: projected gradient did not reach the movement tol");
  }
  return finish_result(spec, theta, std::move(pg.p), pg.iterations, pg.evals);
}

}  // namespace detail

PredictionResult entmax_tsallis(const Vector& theta, double alpha, const SolverConfig& cfg) {
  return detail::entmax_tsallis_impl(theta, alpha, cfg, nullptr, 0);
}

PredictionResult predict_generic(const EntropySpec& spec, const Vector& theta,
                                 const SolverConfig& cfg) {
  return detail::predict_generic_impl(spec, theta, cfg, nullptr, 0);
}

PredictionResult predict(const EntropySpec& spec, const Vector& theta, const SolverConfig& cfg) {
  detail::require_scores(theta);
  switch (spec.family()) {
    case EntropyFamily::Shannon: {
      SimplexPoint p = softmax(theta);
      return PredictionResult{p, log_sum_exp(theta), 0, 1};
    }
    case EntropyFamily::Tsallis: {
      if (cfg.method == SolveMethod::ProjectedGradient) {
        return predict_generic(spec, theta, cfg);
      }
      if (spec.alpha() == 2.0) {
        SimplexPoint p = sparsemax(theta);
        const double conj = theta.dot(p.vec()) + detail::entropy_value_raw(spec, p.vec());
        return PredictionResult{std::move(p), conj, 0, 1};
      }
      return entmax_tsallis(theta, spec.alpha(), cfg);
    }
    case EntropyFamily::Norm:
    case EntropyFamily::SquaredNorm:
    case EntropyFamily::Renyi:
      return predict_generic(spec, theta, cfg);
    case EntropyFamily::BergerParker:
    case EntropyFamily::PairwiseHinge:
      throw std::invalid_argument("no prediction function is available for " + spec.to_string());
  }
  throw std::logic_error("unreachable entropy family");
}

double conjugate_value(const EntropySpec& spec, const Vector& theta, const SolverConfig& cfg) {
  if (spec.family() == EntropyFamily::Shannon) return log_sum_exp(theta);
  return predict(spec, theta, cfg).conjugate_value;
}

PredictionResult temperature_predict(const EntropySpec& spec, const Vector& theta, double t,
                                     const SolverConfig& cfg) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  PredictionResult r = predict(spec, Vector(theta / t), cfg);
  r.conjugate_value *= t;
  return r;
}

}  // namespace fy
