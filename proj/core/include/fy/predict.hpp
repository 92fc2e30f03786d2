#pragma once

#include <vector>

#include "fy/entropy.hpp"
#include "fy/types.hpp"

namespace fy {

enum class SolveMethod { Bisection, Brent, ProjectedGradient };

struct SolverConfig {
  SolveMethod method = SolveMethod::Bisection;
  double tol = 1e-9;       // |phi(tau)| for root finding, iterate movement for PG
  int max_iter = 0;        // 0 = per-method default: 100 (root finding), 10000 (PG)
  double step_size = 0.0;  // PG only; 0 = 1/L when known, else 0.1 with halving backtracking
};

struct PredictionResult {
  SimplexPoint p;
  double conjugate_value = 0.0;  // <theta, p> - Omega(p)
  int iterations = 0;
  long function_evals = 0;
};

/// One-hot encoding of the argmax; ties break toward the lowest index.
SimplexPoint argmax_predict(const Vector& theta);

/// exp(theta - max) / sum, strictly positive.
SimplexPoint softmax(const Vector& theta);

/// log sum exp with max subtraction.
double log_sum_exp(const Vector& theta);

/// Euclidean projection onto the probability simplex (sort + threshold,
/// exact, O(d log d)). Zeros in the output are exact.
Vector project_simplex(const Vector& v);

/// Euclidean projection onto the simplex as a prediction (sparsemax).
SimplexPoint sparsemax(const Vector& theta);

/// Prediction regularized by the negative alpha-Tsallis entropy, alpha > 1,
/// by scalar root finding on the threshold (bisection or Brent over the
/// tight bracket, plus a support-refinement polish), or by projected
/// gradient when cfg.method requests it.
PredictionResult entmax_tsallis(const Vector& theta, double alpha, const SolverConfig& cfg = {});

/// Projected gradient ascent on <theta, p> + H(p) using project_simplex,
/// for any strictly concave entropy. Independent of the root-finding path;
/// serves as its oracle in tests.
PredictionResult predict_generic(const EntropySpec& spec, const Vector& theta,
                                 const SolverConfig& cfg = {});

/// Default dispatcher: closed forms where available (shannon -> softmax,
/// tsallis:2 -> sparsemax), root finding for other tsallis, projected
/// gradient for norm / squared-norm / renyi.
PredictionResult predict(const EntropySpec& spec, const Vector& theta,
                         const SolverConfig& cfg = {});

/// (-H)*(theta); exactly log-sum-exp for shannon.
double conjugate_value(const EntropySpec& spec, const Vector& theta,
                       const SolverConfig& cfg = {});

/// Prediction under t*Omega: predict(theta / t); conjugate scales as
/// t * Omega*(theta / t).
PredictionResult temperature_predict(const EntropySpec& spec, const Vector& theta, double t,
                                     const SolverConfig& cfg = {});

namespace detail {

// Instrumented entry points for the solver benchmark: every phi evaluation
// (or PG iterate) appends the corresponding primal point to *trace;
// max_evals > 0 stops the solver early without throwing.
PredictionResult entmax_tsallis_impl(const Vector& theta, double alpha, const SolverConfig& cfg,
                                     std::vector<Vector>* trace, long max_evals);
PredictionResult predict_generic_impl(const EntropySpec& spec, const Vector& theta,
                                      const SolverConfig& cfg, std::vector<Vector>* trace,
                                      long max_evals);

}  // namespace detail

}  // namespace fy
