#pragma once

// Projected gradient ascent over the probability simplex with halving
// backtracking, monotone in the objective. Used as the generic prediction
// path and as the slow reference solver in the benchmark.

#include <cmath>
#include <functional>
#include <vector>

#include "fy/types.hpp"

namespace fy::detail {

struct PgResult {
  Vector p;
  int iterations = 0;
  long evals = 0;
  bool converged = false;
};

struct PgProblem {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
  double lipschitz = 0.0;  // 0 when no global bound is available
};

Vector project_simplex_raw(const Vector& v);

inline PgResult pg_ascend_simplex(const PgProblem& prob, Eigen::Index d, double tol,
                                  int max_iter, double step0, std::vector<Vector>* trace,
                                  long max_evals = 0) {
  PgResult res;
  Vector p = Vector::Constant(d, 1.0 / static_cast<double>(d));
  if (step0 <= 0.0) step0 = prob.lipschitz > 0.0 ? 1.0 / prob.lipschitz : 0.1;
  double step = step0;
  double fp = prob.value(p);
  ++res.evals;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (max_evals > 0 && res.evals >= max_evals) break;
    Vector g = prob.grad(p);
    ++res.evals;
    Vector trial;
    double ftrial = 0.0;
    bool accepted = false;
    bool stalled = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = project_simplex_raw(p + step * g);
      if (halvings == 0 && (trial - p).norm() < tol) {  // fixed point at full step
        accepted = true;
        stalled = true;
        ftrial = fp;
        break;
      }
      ftrial = prob.value(trial);
      ++res.evals;
      const double ascent = g.dot(trial - p);
      if (ftrial >= fp + 1e-4 * ascent) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (max_evals > 0 && res.evals >= max_evals) break;
    }
    if (!accepted) break;
    const double movement = (trial - p).norm();
    p = std::move(trial);
    fp = ftrial;
    if (trace) trace->push_back(p);
    step = std::min(step * 2.0, step0 * 16.0);
    if (stalled || movement < tol) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  res.p = std::move(p);
  return res;
}

}  // namespace fy::detail
