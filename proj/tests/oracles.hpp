#pragma once

// Test-side oracles, independent of the library solver paths they check:
// finite differences, exhaustive path enumeration, distribution-space
// projected gradient, and nested grid minimization.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fy/types.hpp"

namespace oracles {

using fy::Matrix;
using fy::Vector;

// Deterministic uniform / normal / simplex sampling built on mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vector normal_vector(Eigen::Index d, double scale = 1.0) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = scale * normal();
    return v;
  }

  Vector simplex_point(Eigen::Index d) {
    Vector v(d);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      v(i) = -std::log(uniform());
      sum += v(i);
    }
    return v / sum;
  }

  int integer(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

// Central finite differences of a scalar function of a vector.
inline Vector finite_difference_grad(const std::function<double(const Vector&)>& f,
                                     const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector hi = x, lo = x;
    hi(i) += h;
    lo(i) -= h;
    g(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double rel_error(const Vector& a, const Vector& b) {
  const double denom = std::max({1e-12, a.norm(), b.norm()});
  return (a - b).norm() / denom;
}

// All state sequences of length n over m states.
inline std::vector<std::vector<int>> all_paths(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> states(n, 0);
  while (true) {
    out.push_back(states);
    int t = n - 1;
    while (t >= 0 && ++states[t] == m) {
      states[t] = 0;
      --t;
    }
    if (t < 0) break;
  }
  return out;
}

// Path encoding mirroring the library convention (t=0 transition sits in
// column j=0), written independently for use as an oracle.
inline Vector encode_path_oracle(int n, int m, const std::vector<int>& states) {
  Vector y = Vector::Zero(static_cast<Eigen::Index>(n) * m * m);
  for (int t = 0; t < n; ++t) {
    const int j = t == 0 ? 0 : states[t - 1];
    y((static_cast<Eigen::Index>(t) * m + states[t]) * m + j) = 1.0;
  }
  return y;
}

// Minimize ||V p - theta||^2 over the simplex in p by projected gradient
// with the exact Lipschitz step; V columns are the enumerated vertices.
inline Vector distribution_space_projection(const Matrix& V, const Vector& theta,
                                            int max_iter = 200000, double tol = 1e-12) {
  const Eigen::Index k = V.cols();
  Vector p = Vector::Constant(k, 1.0 / static_cast<double>(k));
  const Matrix G = V.transpose() * V;
  const Vector b = V.transpose() * theta;
  const double lipschitz = G.operatorNorm();
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector grad = G * p - b;
    Vector trial = p - step * grad;
    // simplex projection by sort and threshold
    std::vector<double> u(trial.data(), trial.data() + k);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0, tau = 0.0;
    for (Eigen::Index r = 0; r < k; ++r) {
      cumsum += u[r];
      const double t = (cumsum - 1.0) / static_cast<double>(r + 1);
      if (u[r] > t) tau = t;
    }
    for (Eigen::Index r = 0; r < k; ++r) trial(r) = std::max(trial(r) - tau, 0.0);
    const double movement = (trial - p).norm();
    p = trial;
    if (movement < tol) break;
  }
  return p;
}

// Nested grid minimization of f over the zero-sum plane in R^3 (two free
// coordinates), refined around the best point.
inline double nested_grid_min_zero_sum3(const std::function<double(const Vector&)>& f,
                                        double radius = 4.0, int points = 41, int rounds = 6) {
  double cx = 0.0, cy = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int round = 0; round < rounds; ++round) {
    double bx = cx, by = cy;
    for (int a = 0; a < points; ++a) {
      for (int b = 0; b < points; ++b) {
        const double x = cx - radius + 2.0 * radius * a / (points - 1);
        const double y = cy - radius + 2.0 * radius * b / (points - 1);
        Vector theta(3);
        theta << x, y, -x - y;
        const double v = f(theta);
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    cx = bx;
    cy = by;
    radius *= 2.5 / (points - 1);  // shrink around the incumbent
  }
  return best;
}

}  // namespace oracles
