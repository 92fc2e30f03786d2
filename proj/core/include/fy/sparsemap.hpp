#pragma once

#include <memory>
#include <vector>

#include "fy/permutahedron.hpp"
#include "fy/sequence.hpp"
#include "fy/types.hpp"

namespace fy {

/// Linear maximization oracle over a structured vertex set. map(theta) must
/// return a vertex maximizing <theta, y>; enumerate() is optional and only
/// used by test harnesses and the margin check on small instances.
class MapOracle {
 public:
  virtual ~MapOracle() = default;
  virtual Eigen::Index dim() const = 0;
  virtual Vector map(const Vector& theta) const = 0;
  virtual bool can_enumerate() const { return false; }
  virtual std::vector<Vector> enumerate() const { return {}; }
};

/// The probability simplex: vertices are the basis vectors.
class SimplexOracle final : public MapOracle {
 public:
  explicit SimplexOracle(Eigen::Index d) : d_(d) {}
  Eigen::Index dim() const override { return d_; }
  Vector map(const Vector& theta) const override;
  bool can_enumerate() const override { return true; }
  std::vector<Vector> enumerate() const override;

 private:
  Eigen::Index d_;
};

/// Linear-chain sequences, MAP by Viterbi.
class SequenceOracle final : public MapOracle {
 public:
  SequenceOracle(int n, int m) : n_(n), m_(m) {}
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(n_) * m_ * m_; }
  Vector map(const Vector& theta) const override;
  bool can_enumerate() const override;
  std::vector<Vector> enumerate() const override;
  int timesteps() const { return n_; }
  int states() const { return m_; }

 private:
  int n_, m_;
};

/// Permutations of a fixed sorted vector w, MAP by sorting.
class PermutationOracle final : public MapOracle {
 public:
  explicit PermutationOracle(PermutahedronSpec spec) : spec_(std::move(spec)) {}
  Eigen::Index dim() const override { return spec_.w.size(); }
  Vector map(const Vector& theta) const override;
  bool can_enumerate() const override { return spec_.w.size() <= 8; }
  std::vector<Vector> enumerate() const override;

 private:
  PermutahedronSpec spec_;
};

struct SparseMapConfig {
  double tol = 1e-9;    // conditional-gradient gap at exit
  int max_iter = 1000;
};

/// Projection onto conv(Y) together with a sparse support distribution:
/// mu = sum_k weights[k] * vertices.col(k), weights on the simplex.
struct SparseMapResult {
  Vector mu;
  Matrix vertices;  // one column per support structure
  Vector weights;
  int iterations = 0;
  long oracle_calls = 0;
  double fw_gap = 0.0;
  bool converged = false;
};

/// argmin_{mu in conv(Y)} ||mu - theta||^2 by the active-set method: grow
/// the support with MAP calls, re-solve the restricted quadratic exactly at
/// every step and drop vertices whose weight hits zero.
SparseMapResult sparsemap(const MapOracle& oracle, const Vector& theta,
                          const SparseMapConfig& cfg = {});

/// 1/2 ||y - theta||^2 - 1/2 ||mu - theta||^2 and gradient mu - y.
ValueGrad sparsemap_loss(const MapOracle& oracle, const Vector& theta, const Vector& y,
                         const SparseMapConfig& cfg = {});

/// max_y' <theta, y'> - <theta, y> and its MAP-vertex subgradient.
ValueGrad structured_perceptron_loss(const MapOracle& oracle, const Vector& theta,
                                     const Vector& y);

/// Cost-augmented decoding with c_y = cost_weight * (1 - y) added to the
/// potentials (Hamming-type cost, linear in y').
ValueGrad structured_hinge_loss(const MapOracle& oracle, const Vector& theta, const Vector& y,
                                double cost_weight = 1.0);

/// Enumerates Y and tests <theta, y> >= max_y' (<theta, y'> + m/2 ||y-y'||^2).
/// All vertices must share a common norm (throws UnequalNorms otherwise).
bool structured_margin_check(const MapOracle& oracle, const Vector& theta, const Vector& y,
                             double m);

}  // namespace fy
