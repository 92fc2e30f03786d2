#include "fy/train.hpp"

#include <cmath>
#include <deque>
#include <random>

namespace fy {

void Dataset::validate() const {
  if (X.rows() != Y.rows()) throw std::invalid_argument("X and Y row counts differ");
  if (X.rows() == 0) throw std::invalid_argument("empty dataset");
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (!std::isfinite(X(i, j))) throw std::invalid_argument("X has non-finite entries");
    }
  }
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      if (!std::isfinite(Y(i, j))) throw std::invalid_argument("Y has non-finite entries");
    }
  }
}

RegularizerG RegularizerG::l2(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return RegularizerG{RegKind::L2, lambda, 0.0};
}

RegularizerG RegularizerG::elastic_net(double lambda, double rho) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (rho < 0.0) throw std::invalid_argument("rho must be nonnegative");
  return RegularizerG{RegKind::ElasticNet, lambda, rho};
}

Matrix soft_threshold(const Matrix& V, double threshold) {
  return V.unaryExpr([threshold](double v) {
    if (v > threshold) return v - threshold;
    if (v < -threshold) return v + threshold;
    return 0.0;
  });
}

double RegularizerG::value(const Matrix& W) const {
  double out = 0.5 * lambda * W.squaredNorm();
  if (kind == RegKind::ElasticNet) out += lambda * rho * W.cwiseAbs().sum();
  return out;
}

Matrix RegularizerG::grad_smooth(const Matrix& W) const { return lambda * W; }

Matrix RegularizerG::grad_conjugate(const Matrix& V) const {
  if (kind == RegKind::L2) return V / lambda;
  return soft_threshold(V / lambda, rho);
}

double RegularizerG::conjugate(const Matrix& V) const {
  if (kind == RegKind::L2) return V.squaredNorm() / (2.0 * lambda);
  const Matrix W = grad_conjugate(V);
  return (W.array() * V.array()).sum() - value(W);
}

namespace {

// Sum of per-sample losses; optionally fills the residual matrix Yhat - Y.
double data_loss(const Matrix& W, const Dataset& data, const LossSpec& loss,
                 const SolverConfig& cfg, Matrix* residuals) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Vector theta = W * data.X.row(i).transpose();
    const Vector y = data.Y.row(i).transpose();
    if (residuals) {
      const ValueGrad vg = fy_loss_value_grad(loss, theta, y, cfg);
      total += vg.value;
      residuals->row(i) = vg.grad.transpose();
    } else {
      total += fy_loss(loss, theta, y, cfg);
    }
  }
  return total;
}

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double primal_objective(const LinearModel& model, const Dataset& data, const LossSpec& loss,
                        const RegularizerG& reg, const SolverConfig& cfg) {
  return data_loss(model.W, data, loss, cfg, nullptr) + reg.value(model.W);
}

Matrix primal_gradient(const LinearModel& model, const Dataset& data, const LossSpec& loss,
                       const RegularizerG& reg, const SolverConfig& cfg) {
  if (reg.kind != RegKind::L2) {
    throw std::invalid_argument("primal_gradient needs a differentiable regularizer (l2)");
  }
  Matrix residuals(data.n(), data.d());
  data_loss(model.W, data, loss, cfg, &residuals);
  return residuals.transpose() * data.X + reg.grad_smooth(model.W);
}

namespace {

TrainResult train_prox_gradient(const Dataset& data, const LossSpec& loss,
                                const RegularizerG& reg, const OptConfig& opt,
                                const SolverConfig& cfg) {
  TrainResult res;
  Matrix W = Matrix::Zero(data.d(), data.p());
  const double l1 = reg.kind == RegKind::ElasticNet ? reg.lambda * reg.rho : 0.0;
  auto smooth_value = [&](const Matrix& M) {
    return data_loss(M, data, loss, cfg, nullptr) + 0.5 * reg.lambda * M.squaredNorm();
  };
  Matrix residuals(data.n(), data.d());
  double f = data_loss(W, data, loss, cfg, &residuals) + 0.5 * reg.lambda * W.squaredNorm();
  res.objective_trace.push_back(f + l1 * W.cwiseAbs().sum());
  double step = 1.0;
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    const Matrix grad = residuals.transpose() * data.X + reg.lambda * W;
    Matrix trial;
    double f_trial = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = W - step * grad;
      if (l1 > 0.0) trial = soft_threshold(trial, step * l1);
      f_trial = smooth_value(trial);
      const Matrix delta = trial - W;
      const double quad = (grad.array() * delta.array()).sum() +
                          delta.squaredNorm() / (2.0 * step);
      if (f_trial <= f + quad + 1e-12 * std::abs(f)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double mapping_norm = ((W - trial) / step).lpNorm<Eigen::Infinity>();
    W = trial;
    f = data_loss(W, data, loss, cfg, &residuals) + 0.5 * reg.lambda * W.squaredNorm();
    res.objective_trace.push_back(f + l1 * W.cwiseAbs().sum());
    res.grad_norm = mapping_norm;
    step = std::min(step * 2.0, 1e6);
    if (mapping_norm <= opt.tol) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  res.model.W = std::move(W);
  return res;
}

TrainResult train_lbfgs(const Dataset& data, const LossSpec& loss, const RegularizerG& reg,
                        const OptConfig& opt, const SolverConfig& cfg) {
  if (reg.kind != RegKind::L2) {
    throw std::invalid_argument("the l-bfgs mode needs a smooth regularizer (l2)");
  }
  TrainResult res;
  const Eigen::Index d = data.d(), p = data.p();
  Matrix W = Matrix::Zero(d, p);
  Matrix residuals(data.n(), d);

  auto objective = [&](const Matrix& M) {
    return data_loss(M, data, loss, cfg, nullptr) + 0.5 * reg.lambda * M.squaredNorm();
  };
  auto gradient = [&](const Matrix& M) {
    data_loss(M, data, loss, cfg, &residuals);
    return Matrix(residuals.transpose() * data.X + reg.lambda * M);
  };

  std::deque<Matrix> s_hist, y_hist;
  std::deque<double> rho_hist;
  double f = objective(W);
  Matrix g = gradient(W);
  res.objective_trace.push_back(f);
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (res.grad_norm <= opt.tol) {
      res.converged = true;
      break;
    }
    // two-loop recursion
    Matrix q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * (s_hist[k].array() * q.array()).sum();
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const Matrix& sk = s_hist.back();
      const Matrix& yk = y_hist.back();
      const double gamma = (sk.array() * yk.array()).sum() / yk.squaredNorm();
      q *= gamma;
    }
    for (size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * (y_hist[k].array() * q.array()).sum();
      q += (alpha[k] - beta) * s_hist[k];
    }
    Matrix direction = -q;
    double dir_deriv = (g.array() * direction.array()).sum();
    if (dir_deriv >= 0.0) {  // safeguard: fall back to steepest descent
      direction = -g;
      dir_deriv = -g.squaredNorm();
    }
    double step = 1.0;
    Matrix W_next;
    double f_next = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 50; ++halvings) {
      W_next = W + step * direction;
      f_next = objective(W_next);
      if (f_next <= f + 1e-4 * step * dir_deriv) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Matrix g_next = gradient(W_next);
    Matrix sk = W_next - W;
    Matrix yk = g_next - g;
    const double sy = (sk.array() * yk.array()).sum();
    if (sy > 1e-12) {
      s_hist.push_back(std::move(sk));
      y_hist.push_back(std::move(yk));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.lbfgs_history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    W = std::move(W_next);
    g = std::move(g_next);
    f = f_next;
    res.objective_trace.push_back(f);
  }
  res.grad_norm = g.lpNorm<Eigen::Infinity>();
  res.converged = res.converged || res.grad_norm <= opt.tol;
  res.model.W = std::move(W);
  return res;
}

}  // namespace

TrainResult train_primal(const Dataset& data, const LossSpec& loss, const RegularizerG& reg,
                         const OptConfig& opt, const SolverConfig& cfg) {
  data.validate();
  if (opt.algo == OptConfig::Algo::Lbfgs) return train_lbfgs(data, loss, reg, opt, cfg);
  return train_prox_gradient(data, loss, reg, opt, cfg);
}

DualState::DualState(const Dataset& data) {
  data.validate();
  mu_ = data.Y;
  V_ = Matrix::Zero(data.d(), data.p());
}

void DualState::set_row(Eigen::Index i, const Vector& mu_i, const Dataset& data) {
  const Vector delta = mu_.row(i).transpose() - mu_i;  // old - new
  V_ += delta * data.X.row(i);                         // rank-one cache update
  mu_.row(i) = mu_i.transpose();
}

double DualState::recompute_cache(const Dataset& data) {
  const Matrix fresh = (data.Y - mu_).transpose() * data.X;
  const double drift = (fresh - V_).lpNorm<Eigen::Infinity>();
  V_ = fresh;
  return drift;
}

namespace {

double omega_value(const LossSpec& loss, const Vector& mu, const Vector& y) {
  switch (loss.omega_kind()) {
    case OmegaKind::Squared:
      return 0.5 * mu.squaredNorm();
    case OmegaKind::Zero:
    case OmegaKind::Entropy: {
      SimplexPoint p(mu);  // throws if infeasible
      double base = 0.0;
      if (loss.omega_kind() == OmegaKind::Entropy) {
        base = -detail::entropy_value_raw(loss.entropy_spec(), p.vec());
      }
      if (loss.cost_kind() != CostKind::None) base -= loss.cost_for(y).dot(mu);
      return base;
    }
  }
  throw std::logic_error("unreachable omega kind");
}

}  // namespace

ProxSpec prox_spec_for(const LossSpec& loss, const Vector& y) {
  const bool with_cost = loss.cost_kind() != CostKind::None;
  switch (loss.omega_kind()) {
    case OmegaKind::Squared:
      if (with_cost) throw std::invalid_argument("cost-augmented squared loss has no prox");
      return ProxSpec::squared();
    case OmegaKind::Zero:
      return with_cost ? ProxSpec::cost_hinge(loss.cost_for(y)) : ProxSpec::perceptron();
    case OmegaKind::Entropy: {
      const EntropySpec& h = loss.entropy_spec();
      ProxSpec base = ProxSpec::sparsemax();
      if (h.family() == EntropyFamily::Shannon) {
        base = ProxSpec::neg_shannon();
      } else if (h.family() == EntropyFamily::Tsallis && std::abs(h.alpha() - 2.0) < 1e-12) {
        base = ProxSpec::sparsemax();
      } else if (h.family() == EntropyFamily::Tsallis && std::abs(h.alpha() - 1.5) < 1e-12) {
        base = ProxSpec::neg_tsallis15();
      } else {
        throw std::invalid_argument("no prox available for entropy " + h.to_string() +
                                    "; dual training supports shannon, tsallis:1.5, tsallis:2");
      }
      if (with_cost) {
        throw std::invalid_argument("cost-augmented entropic losses have no direct prox");
      }
      return base;
    }
  }
  throw std::logic_error("unreachable omega kind");
}

double dual_objective(const DualState& state, const Dataset& data, const LossSpec& loss,
                      const RegularizerG& reg) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Vector mu_i = state.row(i);
    const Vector y_i = data.Y.row(i).transpose();
    try {
      total += omega_value(loss, mu_i, y_i) - omega_value(loss, y_i, y_i);
    } catch (const TargetOutsideDomain& e) {
      throw InfeasibleDual("dual row " + std::to_string(i) + " infeasible: " + e.what());
    }
  }
  return total + reg.conjugate(state.V());
}

void dual_ca_step(DualState& state, Eigen::Index i, const Dataset& data, const LossSpec& loss,
                  const RegularizerG& reg, const SolverConfig& cfg) {
  if (i < 0 || i >= data.n()) throw std::invalid_argument("sample index out of range");
  const Vector x_i = data.X.row(i).transpose();
  const double sq = x_i.squaredNorm();
  if (sq == 0.0) return;  // zero feature row carries no dual information
  const double sigma = sq / reg.lambda;
  const Vector v = reg.grad_conjugate(state.V()) * x_i + sigma * state.row(i);
  const Vector y_i = data.Y.row(i).transpose();
  const ProxSpec spec = prox_spec_for(loss, y_i);
  const Vector mu_new = prox(spec, 1.0 / sigma, v / sigma, cfg);
  state.set_row(i, mu_new, data);
}

LinearModel recover_primal(const DualState& state, const RegularizerG& reg) {
  return LinearModel{reg.grad_conjugate(state.V())};
}

double duality_gap(const LinearModel& model, const DualState& state, const Dataset& data,
                   const LossSpec& loss, const RegularizerG& reg, const SolverConfig& cfg) {
  return primal_objective(model, data, loss, reg, cfg) +
         dual_objective(state, data, loss, reg);
}

DualTrainResult train_dual(const Dataset& data, const LossSpec& loss, const RegularizerG& reg,
                           const DualTrainConfig& dual_cfg, const SolverConfig& cfg) {
  data.validate();
  DualTrainResult res;
  DualState state(data);
  uint64_t rng_state = dual_cfg.seed ^ 0x5bf03635ul;
  const Eigen::Index n = data.n();
  for (res.epochs = 0; res.epochs < dual_cfg.max_epochs; ++res.epochs) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = static_cast<Eigen::Index>(splitmix64(rng_state) % n);
      dual_ca_step(state, i, data, loss, reg, cfg);
    }
    state.recompute_cache(data);
    LinearModel model = recover_primal(state, reg);
    res.gap = duality_gap(model, state, data, loss, reg, cfg);
    res.gap_trace.push_back(res.gap);
    res.model = std::move(model);
    if (res.gap <= dual_cfg.gap_tol) {
      res.converged = true;
      ++res.epochs;
      break;
    }
  }
  return res;
}

}  // namespace fy
