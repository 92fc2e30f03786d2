#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "fy/types.hpp"

namespace fy {

enum class EntropyFamily {
  Shannon,
  Tsallis,
  Norm,
  SquaredNorm,
  Renyi,
  BergerParker,
  PairwiseHinge,
};

enum class HingeKind { Hinge, SmoothedHinge, SquaredHinge };

/// Description of a generalized entropy over the probability simplex.
/// Parameters are validated at construction:
///   tsallis: alpha >= 1 (alpha ~ 1 dispatches to shannon)
///   norm / sqnorm: q > 1
///   renyi: beta in (0, 1]  (beta ~ 1 dispatches to shannon)
/// Canonical textual forms: "shannon", "tsallis:1.5", "norm:2", "sqnorm:1.5",
/// "renyi:0.5", "berger-parker", "pairwise-hinge:{hinge,smoothed,squared}".
class EntropySpec {
 public:
  static EntropySpec shannon();
  static EntropySpec tsallis(double alpha);
  static EntropySpec norm(double q);
  static EntropySpec squared_norm(double q);
  static EntropySpec renyi(double beta);
  static EntropySpec berger_parker();
  static EntropySpec pairwise_hinge(HingeKind kind);

  static EntropySpec parse(const std::string& text);
  std::string to_string() const;

  EntropyFamily family() const { return family_; }
  double alpha() const { return param_; }
  double q() const { return param_; }
  double beta() const { return param_; }
  HingeKind hinge_kind() const { return hinge_kind_; }

  /// True for families that are strictly concave on the simplex, which is
  /// what the prediction solvers require.
  bool strictly_concave() const;

 private:
  EntropySpec(EntropyFamily f, double param, HingeKind k)
      : family_(f), param_(param), hinge_kind_(k) {}

  EntropyFamily family_;
  double param_;
  HingeKind hinge_kind_;
};

/// H(p) >= 0. 0*log(0) is evaluated as 0; values are exact (0.0) at vertices.
double entropy_value(const EntropySpec& spec, const SimplexPoint& p);

/// Gradient of H at p. Throws BoundaryGradient for essentially smooth
/// families (shannon, renyi beta<1) when p touches the boundary.
Vector entropy_grad(const EntropySpec& spec, const SimplexPoint& p);

/// Separation margin of the loss generated by -H, when known in closed form:
/// h'(0) - h'(1) for separable families, 1 for (squared-)norm entropies.
/// nullopt when the loss has no margin (shannon) or no covered formula
/// (renyi, pairwise-hinge).
std::optional<double> margin_of(const EntropySpec& spec);

struct AssumptionReport {
  bool zero_at_vertices = true;    // A.1
  bool strictly_concave = true;    // A.2, sampled midpoints
  bool symmetric = true;           // A.3, sampled permutations
  std::string first_violation;

  bool all_pass() const { return zero_at_vertices && strictly_concave && symmetric; }
};

/// Checks A.1 exactly at all vertices, A.2 on sampled midpoint pairs and A.3
/// on sampled permutations, with Dirichlet(1,...,1) samples from a seeded RNG.
AssumptionReport check_assumptions(const EntropySpec& spec, int d, int n_samples = 256,
                                   std::uint64_t seed = 0);

/// Same checks for an arbitrary candidate entropy function (used to probe
/// stubs and new families in tests).
AssumptionReport check_assumptions(const std::function<double(const Vector&)>& entropy, int d,
                                   int n_samples = 256, std::uint64_t seed = 0);

/// Entropies generated by pairwise hinge losses, with analytic limits at
/// vertices (where one coordinate equals 1 the value is exactly 0).
double pairwise_hinge_entropy(HingeKind kind, const SimplexPoint& p);

namespace detail {

// Raw kernels used by the iterative solvers. p is assumed to lie on the
// simplex; clamp_floor > 0 keeps essentially smooth gradients finite near
// the boundary instead of throwing.
double entropy_value_raw(const EntropySpec& spec, const Vector& p);
Vector entropy_grad_raw(const EntropySpec& spec, const Vector& p, double clamp_floor);

}  // namespace detail

}  // namespace fy
