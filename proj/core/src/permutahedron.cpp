#include "fy/permutahedron.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace fy {

PermutahedronSpec::PermutahedronSpec(Vector w_desc) : w(std::move(w_desc)) {
  if (w.size() < 1) throw std::invalid_argument("permutahedron needs a non-empty w");
  detail::require_finite(w, "permutahedron weights");
  for (Eigen::Index i = 1; i < w.size(); ++i) {
    if (w(i - 1) < w(i)) throw std::invalid_argument("w must be sorted in descending order");
  }
}

namespace {

std::vector<Eigen::Index> argsort_desc(const Vector& v) {
  std::vector<Eigen::Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&v](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  return idx;
}

}  // namespace

Vector permutahedron_map(const PermutahedronSpec& spec, const Vector& theta) {
  detail::require_finite(theta, "score vector");
  if (theta.size() != spec.w.size()) throw std::invalid_argument("theta and w sizes differ");
  const auto idx = argsort_desc(theta);
  Vector y(theta.size());
  for (Eigen::Index r = 0; r < theta.size(); ++r) y(idx[r]) = spec.w(r);
  return y;
}

Vector isotonic_nonincreasing(const Vector& r) {
  const Eigen::Index d = r.size();
  std::vector<double> value(d);
  std::vector<double> weight(d);
  std::vector<Eigen::Index> size(d);
  Eigen::Index blocks = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    value[blocks] = r(i);
    weight[blocks] = 1.0;
    size[blocks] = 1;
    ++blocks;
    // merge while the nonincreasing constraint is violated
    while (blocks > 1 && value[blocks - 2] < value[blocks - 1]) {
      const double wsum = weight[blocks - 2] + weight[blocks - 1];
      value[blocks - 2] =
          (weight[blocks - 2] * value[blocks - 2] + weight[blocks - 1] * value[blocks - 1]) / wsum;
      weight[blocks - 2] = wsum;
      size[blocks - 2] += size[blocks - 1];
      --blocks;
    }
  }
  Vector out(d);
  Eigen::Index pos = 0;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    for (Eigen::Index k = 0; k < size[b]; ++k) out(pos++) = value[b];
  }
  return out;
}

Vector permutahedron_project(const PermutahedronSpec& spec, const Vector& theta) {
  detail::require_finite(theta, "score vector");
  const Eigen::Index d = theta.size();
  if (d != spec.w.size()) throw std::invalid_argument("theta and w sizes differ");
  const auto idx = argsort_desc(theta);
  Vector sorted(d);
  for (Eigen::Index r = 0; r < d; ++r) sorted(r) = theta(idx[r]);
  const Vector c = isotonic_nonincreasing(sorted - spec.w);
  Vector mu(d);
  for (Eigen::Index r = 0; r < d; ++r) mu(idx[r]) = sorted(r) - c(r);
  return mu;
}

}  // namespace fy
