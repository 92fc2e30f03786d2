#include "fy/sparsemap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fy {

Vector SimplexOracle::map(const Vector& theta) const {
  if (theta.size() != d_) throw std::invalid_argument("oracle input size mismatch");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < d_; ++i) {
    if (theta(i) > theta(best)) best = i;
  }
  Vector y = Vector::Zero(d_);
  y(best) = 1.0;
  return y;
}

std::vector<Vector> SimplexOracle::enumerate() const {
  std::vector<Vector> out;
  out.reserve(d_);
  for (Eigen::Index k = 0; k < d_; ++k) {
    Vector y = Vector::Zero(d_);
    y(k) = 1.0;
    out.push_back(std::move(y));
  }
  return out;
}

Vector SequenceOracle::map(const Vector& theta) const {
  return viterbi_map(SequencePotentials::from_vector(n_, m_, theta));
}

bool SequenceOracle::can_enumerate() const {
  double count = 1.0;
  for (int t = 0; t < n_; ++t) {
    count *= m_;
    if (count > 4096.0) return false;
  }
  return true;
}

std::vector<Vector> SequenceOracle::enumerate() const {
  if (!can_enumerate()) return {};
  std::vector<Vector> out;
  std::vector<int> states(n_, 0);
  while (true) {
    out.push_back(encode_path(n_, m_, states));
    int t = n_ - 1;
    while (t >= 0 && ++states[t] == m_) {
      states[t] = 0;
      --t;
    }
    if (t < 0) break;
  }
  return out;
}

Vector PermutationOracle::map(const Vector& theta) const {
  return permutahedron_map(spec_, theta);
}

std::vector<Vector> PermutationOracle::enumerate() const {
  const Eigen::Index d = spec_.w.size();
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Vector> out;
  do {
    Vector y(d);
    for (Eigen::Index i = 0; i < d; ++i) y(i) = spec_.w(idx[i]);
    out.push_back(std::move(y));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

namespace {

// Minimizes ||V q - theta||^2 subject to sum(q) = 1 (signs free) through the
// bordered KKT system; a tiny ridge keeps near-dependent supports solvable.
Vector affine_weights(const Matrix& V, const Vector& theta) {
  const Eigen::Index k = V.cols();
  Matrix kkt(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = V.transpose() * V;
  kkt.topLeftCorner(k, k).diagonal().array() += 1e-12;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  kkt(k, k) = 0.0;
  Vector rhs(k + 1);
  rhs.head(k) = V.transpose() * theta;
  rhs(k) = 1.0;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  return sol.head(k);
}

void drop_columns(Matrix& V, Vector& w, const std::vector<Eigen::Index>& keep) {
  Matrix v2(V.rows(), static_cast<Eigen::Index>(keep.size()));
  Vector w2(static_cast<Eigen::Index>(keep.size()));
  for (Eigen::Index c = 0; c < v2.cols(); ++c) {
    v2.col(c) = V.col(keep[c]);
    w2(c) = w(keep[c]);
  }
  V.swap(v2);
  w.swap(w2);
}

}  // namespace

SparseMapResult sparsemap(const MapOracle& oracle, const Vector& theta,
                          const SparseMapConfig& cfg) {
  detail::require_finite(theta, "score vector");
  if (theta.size() != oracle.dim()) throw std::invalid_argument("oracle input size mismatch");
  if (cfg.max_iter < 1) throw std::invalid_argument("sparsemap needs max_iter >= 1");

  SparseMapResult res;
  Vector v0 = oracle.map(theta);
  res.oracle_calls = 1;
  Matrix V(theta.size(), 1);
  V.col(0) = v0;
  Vector w = Vector::Ones(1);
  Vector mu = v0;

  for (res.iterations = 0; res.iterations < cfg.max_iter; ++res.iterations) {
    const Vector v = oracle.map(theta - mu);
    ++res.oracle_calls;
    res.fw_gap = (theta - mu).dot(v - mu);
    if (res.fw_gap <= cfg.tol) {
      res.converged = true;
      break;
    }
    bool duplicate = false;
    for (Eigen::Index c = 0; c < V.cols(); ++c) {
      if ((V.col(c) - v).lpNorm<Eigen::Infinity>() <= 1e-12) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) break;  // restricted problem already optimal over this support

    V.conservativeResize(Eigen::NoChange, V.cols() + 1);
    V.col(V.cols() - 1) = v;
    w.conservativeResize(w.size() + 1);
    w(w.size() - 1) = 0.0;

    // inner loop: exact solve over the affine hull, stepping back to the
    // feasible region and dropping vertices that hit zero
    for (int minor = 0; minor < 4 * static_cast<int>(V.cols()) + 8; ++minor) {
      const Vector q = affine_weights(V, theta);
      if (q.minCoeff() >= -1e-12) {
        w = q.cwiseMax(0.0);
        const double s = w.sum();
        if (s > 0.0) w /= s;
        break;
      }
      double gamma = 1.0;
      for (Eigen::Index c = 0; c < q.size(); ++c) {
        if (q(c) < 0.0 && w(c) > q(c)) gamma = std::min(gamma, w(c) / (w(c) - q(c)));
      }
      w = w + gamma * (q - w);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index c = 0; c < w.size(); ++c) {
        if (w(c) > 1e-12) keep.push_back(c);
      }
      if (keep.empty()) {
        keep.push_back(0);
        w(0) = 1.0;
      }
      if (keep.size() < static_cast<size_t>(w.size())) drop_columns(V, w, keep);
      const double s = w.sum();
      if (s > 0.0) w /= s;
    }
    mu = V * w;
  }

  // prune residual zero weights
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    if (w(c) > 1e-12) keep.push_back(c);
  }
  if (keep.size() < static_cast<size_t>(w.size())) drop_columns(V, w, keep);
  const double s = w.sum();
  if (s > 0.0) w /= s;
  res.mu = V * w;
  res.vertices = std::move(V);
  res.weights = std::move(w);
  if (!res.converged) {
    const Vector v = oracle.map(theta - res.mu);
    res.fw_gap = (theta - res.mu).dot(v - res.mu);
    res.converged = res.fw_gap <= std::max(cfg.tol, 1e-9);
    if (!res.converged) {
      throw NoConvergence("sparsemap: conditional-gradient gap " + std::to_string(res.fw_gap) +
                          " above tolerance after max_iter");
    }
  }
  return res;
}

ValueGrad sparsemap_loss(const MapOracle& oracle, const Vector& theta, const Vector& y,
                         const SparseMapConfig& cfg) {
  detail::require_finite(y, "target");
  const SparseMapResult res = sparsemap(oracle, theta, cfg);
  ValueGrad out;
  out.value = 0.5 * (y - theta).squaredNorm() - 0.5 * (res.mu - theta).squaredNorm();
  if (out.value < 0.0 && out.value > -1e-8) out.value = 0.0;
  out.grad = res.mu - y;
  return out;
}

ValueGrad structured_perceptron_loss(const MapOracle& oracle, const Vector& theta,
                                     const Vector& y) {
  detail::require_finite(theta, "score vector");
  detail::require_finite(y, "target");
  const Vector v = oracle.map(theta);
  ValueGrad out;
  out.value = theta.dot(v) - theta.dot(y);
  if (out.value < 0.0 && out.value > -1e-8) out.value = 0.0;
  out.grad = v - y;
  return out;
}

ValueGrad structured_hinge_loss(const MapOracle& oracle, const Vector& theta, const Vector& y,
                                double cost_weight) {
  detail::require_finite(theta, "score vector");
  detail::require_finite(y, "target");
  if (cost_weight < 0.0) throw std::invalid_argument("cost weight must be nonnegative");
  const Vector cost = cost_weight * (Vector::Ones(y.size()) - y);
  const Vector v = oracle.map(theta + cost);
  ValueGrad out;
  out.value = (theta + cost).dot(v) - theta.dot(y);
  if (out.value < 0.0 && out.value > -1e-8) out.value = 0.0;
  out.grad = v - y;
  return out;
}

bool structured_margin_check(const MapOracle& oracle, const Vector& theta, const Vector& y,
                             double m) {
  if (!oracle.can_enumerate()) {
    throw std::invalid_argument("structured_margin_check needs an enumerable oracle");
  }
  const std::vector<Vector> vertices = oracle.enumerate();
  if (vertices.empty()) throw std::invalid_argument("oracle enumerated no vertices");
  const double r2 = vertices.front().squaredNorm();
  for (const Vector& v : vertices) {
    if (std::abs(v.squaredNorm() - r2) > 1e-9 * std::max(1.0, r2)) {
      throw UnequalNorms("structure vertices do not share a common norm");
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& v : vertices) {
    best = std::max(best, theta.dot(v) + 0.5 * m * (y - v).squaredNorm());
  }
  return theta.dot(y) >= best - 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace fy
