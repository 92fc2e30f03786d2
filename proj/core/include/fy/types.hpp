#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace fy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Feasibility tolerance for domain membership checks (simplex, box).
inline constexpr double kFeasTol = 1e-9;

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct TargetOutsideDomain : std::runtime_error {
  explicit TargetOutsideDomain(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidStructure : std::runtime_error {
  explicit InvalidStructure(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryGradient : std::runtime_error {
  explicit BoundaryGradient(const std::string& what) : std::runtime_error(what) {}
};

struct UnequalNorms : std::runtime_error {
  explicit UnequalNorms(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleDual : std::runtime_error {
  explicit InfeasibleDual(const std::string& what) : std::runtime_error(what) {}
};

/// A point of the probability simplex. Construction rejects vectors farther
/// than kFeasTol from the simplex, then clamps entries to [0, 1] and
/// renormalizes so downstream code can rely on nonnegativity and unit sum.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector p);

  static SimplexPoint vertex(Eigen::Index d, Eigen::Index k);
  static SimplexPoint uniform(Eigen::Index d);

  const Vector& vec() const { return p_; }
  Eigen::Index dim() const { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_(i); }

 private:
  Vector p_;
};

struct ValueGrad {
  double value = 0.0;
  Vector grad;
};

namespace detail {

void require_finite(const Vector& v, const char* what);
void require_scores(const Vector& theta);  // finite, length >= 2

}  // namespace detail

}  // namespace fy
