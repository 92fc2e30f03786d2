#include "fy/measures.hpp"

#include <cmath>

namespace fy {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// log(1 + e^u) without overflow
double softplus(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double phi_value(OvaPhi phi, double y) {
  switch (phi) {
    case OvaPhi::Squared:
      if (y < 0.0) throw TargetOutsideDomain("squared ova target must be nonnegative");
      return 0.5 * y * y;
    case OvaPhi::FermiDirac:
      if (y < -kFeasTol || y > 1.0 + kFeasTol) {
        throw TargetOutsideDomain("fermi-dirac ova target must lie in [0, 1]");
      }
      y = std::min(1.0, std::max(0.0, y));
      return xlogx(y) + xlogx(1.0 - y);
    case OvaPhi::Tsallis2:
      if (y < -kFeasTol || y > 1.0 + kFeasTol) {
        throw TargetOutsideDomain("sparse-sigmoid ova target must lie in [0, 1]");
      }
      y = std::min(1.0, std::max(0.0, y));
      return y * y - y;
  }
  throw std::logic_error("unreachable ova phi");
}

double phi_conjugate(OvaPhi phi, double s) {
  switch (phi) {
    case OvaPhi::Squared: {
      const double sp = std::max(s, 0.0);
      return 0.5 * sp * sp;
    }
    case OvaPhi::FermiDirac:
      return softplus(s);
    case OvaPhi::Tsallis2: {
      if (s <= -1.0) return 0.0;
      if (s >= 1.0) return s;
      const double v = 1.0 + s;
      return 0.25 * v * v;
    }
  }
  throw std::logic_error("unreachable ova phi");
}

double phi_predict(OvaPhi phi, double s) {
  switch (phi) {
    case OvaPhi::Squared:
      return std::max(s, 0.0);
    case OvaPhi::FermiDirac:
      return s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
    case OvaPhi::Tsallis2:
      return std::min(1.0, std::max(0.0, 0.5 * (s + 1.0)));
  }
  throw std::logic_error("unreachable ova phi");
}

}  // namespace

OvaPhi parse_ova_phi(const std::string& text) {
  if (text == "squared") return OvaPhi::Squared;
  if (text == "fermi-dirac") return OvaPhi::FermiDirac;
  if (text == "sparse-sigmoid" || text == "tsallis2") return OvaPhi::Tsallis2;
  throw std::invalid_argument("unknown ova regularizer '" + text + "'");
}

std::string ova_phi_name(OvaPhi phi) {
  switch (phi) {
    case OvaPhi::Squared: return "squared";
    case OvaPhi::FermiDirac: return "fermi-dirac";
    case OvaPhi::Tsallis2: return "sparse-sigmoid";
  }
  return "?";
}

Vector ova_predict(OvaPhi phi, const Vector& theta) {
  detail::require_finite(theta, "score vector");
  Vector m(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) m(j) = phi_predict(phi, theta(j));
  return m;
}

double ova_loss(OvaPhi phi, const Vector& theta, const Vector& y) {
  detail::require_finite(theta, "score vector");
  detail::require_finite(y, "target");
  if (theta.size() != y.size()) throw std::invalid_argument("theta and target sizes differ");
  double loss = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    loss += phi_conjugate(phi, theta(j)) + phi_value(phi, y(j)) - theta(j) * y(j);
  }
  if (loss < 0.0 && loss > -1e-10) loss = 0.0;
  return loss;
}

Vector ova_loss_grad(OvaPhi phi, const Vector& theta, const Vector& y) {
  Vector m = ova_predict(phi, theta);
  if (theta.size() != y.size()) throw std::invalid_argument("theta and target sizes differ");
  return m - y;
}

}  // namespace fy
