#include "fy/loss.hpp"

#include <cmath>
#include <limits>

namespace fy {

LossSpec LossSpec::entropy(EntropySpec h) { return LossSpec(OmegaKind::Entropy, std::move(h)); }
LossSpec LossSpec::perceptron() { return LossSpec(OmegaKind::Zero, std::nullopt); }
LossSpec LossSpec::squared() { return LossSpec(OmegaKind::Squared, std::nullopt); }

LossSpec LossSpec::parse(const std::string& text) {
  if (text == "zero" || text == "perceptron") return perceptron();
  if (text == "squared") return squared();
  return entropy(EntropySpec::parse(text));
}

std::string LossSpec::to_string() const {
  switch (omega_) {
    case OmegaKind::Zero: return "zero";
    case OmegaKind::Squared: return "squared";
    case OmegaKind::Entropy: return h_->to_string();
  }
  return "?";
}

const EntropySpec& LossSpec::entropy_spec() const {
  if (!h_) throw std::logic_error("loss spec has no entropy");
  return *h_;
}

LossSpec LossSpec::with_zero_one_cost() const {
  LossSpec out = *this;
  out.cost_kind_ = CostKind::ZeroOne;
  out.cost_.resize(0);
  return out;
}

LossSpec LossSpec::with_cost(Vector c) const {
  detail::require_finite(c, "cost vector");
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) < 0.0) throw std::invalid_argument("cost vector must be nonnegative");
  }
  LossSpec out = *this;
  out.cost_kind_ = CostKind::Explicit;
  out.cost_ = std::move(c);
  return out;
}

Vector LossSpec::cost_for(const Vector& y) const {
  switch (cost_kind_) {
    case CostKind::None: return Vector();
    case CostKind::ZeroOne: return Vector::Ones(y.size()) - y;
    case CostKind::Explicit:
      if (cost_.size() != y.size()) {
        throw std::invalid_argument("cost vector length does not match target");
      }
      return cost_;
  }
  return Vector();
}

LossSpec cost_augment(const LossSpec& spec, Vector c) { return spec.with_cost(std::move(c)); }

namespace {

// Omega(y) for the target; validates domain membership.
double omega_of_target(const LossSpec& spec, const Vector& y) {
  switch (spec.omega_kind()) {
    case OmegaKind::Squared:
      detail::require_finite(y, "target");
      return 0.5 * y.squaredNorm();
    case OmegaKind::Zero:
      (void)SimplexPoint(y);
      return 0.0;
    case OmegaKind::Entropy: {
      SimplexPoint p(y);
      return -detail::entropy_value_raw(spec.entropy_spec(), p.vec());
    }
  }
  throw std::logic_error("unreachable omega kind");
}

// Conjugate value and maximizer at the (already cost-shifted) scores, for
// the simplex-domain regularizers. The squared loss is handled inline.
PredictionResult conjugate_at(const LossSpec& spec, const Vector& theta,
                              const SolverConfig& cfg) {
  if (spec.omega_kind() == OmegaKind::Zero) {
    SimplexPoint p = argmax_predict(theta);
    return PredictionResult{p, theta.maxCoeff(), 0, 1};
  }
  return predict(spec.entropy_spec(), theta, cfg);
}

}  // namespace

ValueGrad fy_loss_value_grad(const LossSpec& spec, const Vector& theta, const Vector& y,
                             const SolverConfig& cfg) {
  detail::require_finite(theta, "score vector");
  if (theta.size() != y.size()) throw std::invalid_argument("theta and target sizes differ");
  const double omega_y = omega_of_target(spec, y);
  Vector theta_eff = theta;
  if (spec.cost_kind() != CostKind::None) theta_eff += spec.cost_for(y);

  ValueGrad out;
  if (spec.omega_kind() == OmegaKind::Squared) {
    out.value = 0.5 * theta_eff.squaredNorm() + omega_y - theta_eff.dot(y);
    out.grad = theta_eff - y;
  } else {
    const PredictionResult r = conjugate_at(spec, theta_eff, cfg);
    out.value = r.conjugate_value + omega_y - theta_eff.dot(y);
    out.grad = r.p.vec() - y;
  }
  // The Fenchel-Young inequality guarantees a nonnegative value; trim
  // solver-level negatives.
  if (out.value < 0.0 && out.value > -1e-8) out.value = 0.0;
  return out;
}

double fy_loss(const LossSpec& spec, const Vector& theta, const Vector& y,
               const SolverConfig& cfg) {
  return fy_loss_value_grad(spec, theta, y, cfg).value;
}

Vector fy_loss_grad(const LossSpec& spec, const Vector& theta, const Vector& y,
                    const SolverConfig& cfg) {
  return fy_loss_value_grad(spec, theta, y, cfg).grad;
}

double binary_loss(BinaryLossKind kind, double s, int y) {
  if (y != 1 && y != -1) throw std::invalid_argument("binary label must be +1 or -1");
  const double u = -static_cast<double>(y) * s;
  switch (kind) {
    case BinaryLossKind::Logistic:
      // log(1 + e^u), stable for large |u|
      return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    case BinaryLossKind::ModifiedHuber: {
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return u;
      const double v = 1.0 + u;
      return 0.25 * v * v;
    }
    case BinaryLossKind::SmoothedHinge: {
      if (u <= -1.0) return 0.0;
      if (u >= 0.0) return u + 0.5;
      const double v = 1.0 + u;
      return 0.5 * v * v;
    }
  }
  throw std::logic_error("unreachable binary loss kind");
}

double expected_loss(const LossSpec& spec, const Vector& theta, const SimplexPoint& p,
                     const SolverConfig& cfg) {
  const Eigen::Index d = theta.size();
  if (p.dim() != d) throw std::invalid_argument("distribution and scores sizes differ");
  double total = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (p[k] == 0.0) continue;
    Vector ek = Vector::Zero(d);
    ek(k) = 1.0;
    total += p[k] * fy_loss(spec, theta, ek, cfg);
  }
  return total;
}

double bregman_information(const LossSpec& spec, const SimplexPoint& p) {
  const Eigen::Index d = p.dim();
  double expected_omega = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (p[k] == 0.0) continue;
    Vector ek = Vector::Zero(d);
    ek(k) = 1.0;
    switch (spec.omega_kind()) {
      case OmegaKind::Zero: break;
      case OmegaKind::Squared: expected_omega += p[k] * 0.5; break;
      case OmegaKind::Entropy:
        expected_omega += p[k] * -detail::entropy_value_raw(spec.entropy_spec(), ek);
        break;
    }
  }
  double omega_mean = 0.0;
  switch (spec.omega_kind()) {
    case OmegaKind::Zero: omega_mean = 0.0; break;
    case OmegaKind::Squared: omega_mean = 0.5 * p.vec().squaredNorm(); break;
    case OmegaKind::Entropy:
      omega_mean = -detail::entropy_value_raw(spec.entropy_spec(), p.vec());
      break;
  }
  return expected_omega - omega_mean;
}

bool margin_holds(const Vector& theta, Eigen::Index k, double m) {
  detail::require_scores(theta);
  if (k < 0 || k >= theta.size()) throw std::invalid_argument("class index out of range");
  double rest = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (j != k) rest = std::max(rest, theta(j));
  }
  return theta(k) >= m + rest;
}

}  // namespace fy
