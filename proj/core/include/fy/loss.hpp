#pragma once

#include <optional>
#include <string>

#include "fy/entropy.hpp"
#include "fy/predict.hpp"
#include "fy/types.hpp"

namespace fy {

enum class OmegaKind { Entropy, Zero, Squared };
enum class CostKind { None, ZeroOne, Explicit };
enum class BinaryLossKind { Logistic, ModifiedHuber, SmoothedHinge };

/// A loss description: the output regularizer (a generalized entropy over
/// the simplex, the zero regularizer of the perceptron, or the squared
/// regularizer over R^d) plus an optional cost vector for cost-sensitive
/// variants. Textual grammar: the entropy grammar plus "zero" and "squared".
class LossSpec {
 public:
  static LossSpec entropy(EntropySpec h);
  static LossSpec perceptron();
  static LossSpec squared();
  static LossSpec parse(const std::string& text);
  std::string to_string() const;

  LossSpec with_zero_one_cost() const;
  LossSpec with_cost(Vector c) const;

  OmegaKind omega_kind() const { return omega_; }
  const EntropySpec& entropy_spec() const;
  CostKind cost_kind() const { return cost_kind_; }
  const Vector& cost_vector() const { return cost_; }

  /// Cost vector to add to theta for target y (empty when cost_kind is None).
  Vector cost_for(const Vector& y) const;

 private:
  LossSpec(OmegaKind k, std::optional<EntropySpec> h) : omega_(k), h_(std::move(h)) {}

  OmegaKind omega_;
  std::optional<EntropySpec> h_;
  CostKind cost_kind_ = CostKind::None;
  Vector cost_;
};

/// Cost-sensitive construction: the loss evaluates as L_Omega(theta + c; y).
LossSpec cost_augment(const LossSpec& spec, Vector c);

/// L(theta; y) = Omega*(theta') + Omega(y) - <theta', y> with theta' the
/// cost-shifted scores. Throws TargetOutsideDomain when y violates dom(Omega).
double fy_loss(const LossSpec& spec, const Vector& theta, const Vector& y,
               const SolverConfig& cfg = {});

/// Subgradient yhat(theta') - y (the gradient when Omega is strictly convex;
/// for the perceptron, the lowest-index argmax vertex residual).
Vector fy_loss_grad(const LossSpec& spec, const Vector& theta, const Vector& y,
                    const SolverConfig& cfg = {});

/// Loss and gradient from a single conjugate solve.
ValueGrad fy_loss_value_grad(const LossSpec& spec, const Vector& theta, const Vector& y,
                             const SolverConfig& cfg = {});

/// Binary margin losses phi*(-y s), y in {-1, +1}.
double binary_loss(BinaryLossKind kind, double s, int y);

/// E_{i ~ p}[ L(theta; e_i) ].
double expected_loss(const LossSpec& spec, const Vector& theta, const SimplexPoint& p,
                     const SolverConfig& cfg = {});

/// E_p[Omega(Y)] - Omega(E_p[Y]) over the vertices; equals H(p) for
/// entropies that vanish at vertices.
double bregman_information(const LossSpec& spec, const SimplexPoint& p);

/// theta_k >= m + max_{j != k} theta_j.
bool margin_holds(const Vector& theta, Eigen::Index k, double m);

}  // namespace fy
