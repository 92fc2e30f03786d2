#pragma once

#include <cstdint>
#include <vector>

#include "fy/loss.hpp"
#include "fy/prox.hpp"
#include "fy/types.hpp"

namespace fy {

/// Rows of X are samples, rows of Y are targets in dom(Omega).
struct Dataset {
  Matrix X;  // n x p
  Matrix Y;  // n x d

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index d() const { return Y.cols(); }
  void validate() const;
};

struct LinearModel {
  Matrix W;  // d x p, theta = W x
};

enum class RegKind { L2, ElasticNet };

/// Parameter regularizer G(W): lambda/2 ||W||_F^2, optionally plus
/// lambda * rho * ||W||_1.
struct RegularizerG {
  RegKind kind = RegKind::L2;
  double lambda = 1.0;
  double rho = 0.0;

  static RegularizerG l2(double lambda);
  static RegularizerG elastic_net(double lambda, double rho);

  double value(const Matrix& W) const;
  Matrix grad_smooth(const Matrix& W) const;      // lambda W
  Matrix grad_conjugate(const Matrix& V) const;   // grad G*: V/lambda or its soft-thresholding
  double conjugate(const Matrix& V) const;        // G*(V)
};

Matrix soft_threshold(const Matrix& V, double threshold);

struct OptConfig {
  enum class Algo { ProxGradient, Lbfgs };
  Algo algo = Algo::ProxGradient;
  int max_iter = 500;
  double tol = 1e-7;       // sup-norm of the gradient (mapping)
  int lbfgs_history = 10;
};

double primal_objective(const LinearModel& model, const Dataset& data, const LossSpec& loss,
                        const RegularizerG& reg, const SolverConfig& cfg = {});

/// (Yhat - Y)^T X + lambda W; requires a differentiable G (L2).
Matrix primal_gradient(const LinearModel& model, const Dataset& data, const LossSpec& loss,
                       const RegularizerG& reg, const SolverConfig& cfg = {});

struct TrainResult {
  LinearModel model;
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;
};

/// Proximal gradient with halving backtracking (default), or L-BFGS for
/// smooth G. Non-convergence is reported in the result, not thrown.
TrainResult train_primal(const Dataset& data, const LossSpec& loss, const RegularizerG& reg,
                         const OptConfig& opt = {}, const SolverConfig& cfg = {});

/// Dual variables of the training problem, one row per sample, with the
/// cached V = (Y - mu)^T X kept consistent across coordinate steps.
class DualState {
 public:
  DualState(const Dataset& data);

  const Matrix& mu() const { return mu_; }
  const Matrix& V() const { return V_; }
  Vector row(Eigen::Index i) const { return mu_.row(i).transpose(); }

  /// Replaces row i and updates the cache with a rank-one correction.
  void set_row(Eigen::Index i, const Vector& mu_i, const Dataset& data);

  /// Recomputes V from scratch; returns the sup-norm drift washed out.
  double recompute_cache(const Dataset& data);

 private:
  Matrix mu_;  // n x d
  Matrix V_;   // d x p
};

/// D(mu) = sum_i Omega(mu_i) - Omega(y_i) + G*(V(mu)); the dual problem is
/// max -D. Throws InfeasibleDual when a row leaves dom(Omega).
double dual_objective(const DualState& state, const Dataset& data, const LossSpec& loss,
                      const RegularizerG& reg);

/// One block coordinate-ascent step on sample i:
///   sigma_i = ||x_i||^2 / lambda,
///   v_i = grad G*(V) x_i + sigma_i mu_i,
///   mu_i <- prox_{Omega / sigma_i}(v_i / sigma_i).
void dual_ca_step(DualState& state, Eigen::Index i, const Dataset& data, const LossSpec& loss,
                  const RegularizerG& reg, const SolverConfig& cfg = {});

/// W = grad G*(V(mu)).
LinearModel recover_primal(const DualState& state, const RegularizerG& reg);

/// primal_objective(model) + D(mu) >= 0; the convergence certificate.
double duality_gap(const LinearModel& model, const DualState& state, const Dataset& data,
                   const LossSpec& loss, const RegularizerG& reg, const SolverConfig& cfg = {});

struct DualTrainConfig {
  int max_epochs = 200;
  double gap_tol = 1e-4;
  std::uint64_t seed = 0;
};

struct DualTrainResult {
  LinearModel model;
  double gap = 0.0;
  int epochs = 0;
  bool converged = false;
  std::vector<double> gap_trace;  // one entry per epoch
};

/// Uniform-with-replacement coordinate ascent; an epoch is n steps. The
/// cache is recomputed at every epoch boundary.
DualTrainResult train_dual(const Dataset& data, const LossSpec& loss, const RegularizerG& reg,
                           const DualTrainConfig& dual_cfg = {}, const SolverConfig& cfg = {});

/// The prox spec matching a loss's output regularizer (cost-aware).
ProxSpec prox_spec_for(const LossSpec& loss, const Vector& y);

}  // namespace fy
