#include "fy/types.hpp"

#include <cmath>

namespace fy {

SimplexPoint::SimplexPoint(Vector p) : p_(std::move(p)) {
  if (p_.size() < 1) throw TargetOutsideDomain("simplex point must be non-empty");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    const double v = p_(i);
    if (!std::isfinite(v)) throw TargetOutsideDomain("simplex point has non-finite entry");
    if (v < -kFeasTol) {
      throw TargetOutsideDomain("simplex point entry " + std::to_string(v) + " is negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kFeasTol * std::max<double>(1, p_.size())) {
    throw TargetOutsideDomain("simplex point sums to " + std::to_string(sum));
  }
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    p_(i) = std::min(1.0, std::max(0.0, p_(i)));
  }
  const double s = p_.sum();
  if (s != 1.0 && s > 0.0) p_ /= s;
}

SimplexPoint SimplexPoint::vertex(Eigen::Index d, Eigen::Index k) {
  Vector p = Vector::Zero(d);
  p(k) = 1.0;
  return SimplexPoint(std::move(p));
}

SimplexPoint SimplexPoint::uniform(Eigen::Index d) {
  return SimplexPoint(Vector::Constant(d, 1.0 / static_cast<double>(d)));
}

namespace detail {

void require_finite(const Vector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) {
      throw std::invalid_argument(std::string(what) + " has non-finite entry at index " +
                                  std::to_string(i));
    }
  }
}

void require_scores(const Vector& theta) {
  if (theta.size() < 2) throw std::invalid_argument("score vector needs length >= 2");
  require_finite(theta, "score vector");
}

}  // namespace detail

}  // namespace fy
