#pragma once

#include "fy/types.hpp"

namespace fy {

/// The convex hull of all permutations of a fixed vector w, which must be
/// sorted in descending order.
struct PermutahedronSpec {
  Vector w;
  explicit PermutahedronSpec(Vector w_desc);
};

/// MAP over the permutahedron: w aligned with the descending order of
/// theta (the ordered weighted averaging vertex). Ties in theta break by
/// index. O(d log d).
Vector permutahedron_map(const PermutahedronSpec& spec, const Vector& theta);

/// Euclidean projection of theta onto the permutahedron: sort, then
/// pool-adjacent-violators on the sorted residual problem.
Vector permutahedron_project(const PermutahedronSpec& spec, const Vector& theta);

/// Nonincreasing isotonic regression (least squares under c_1 >= ... >= c_d).
Vector isotonic_nonincreasing(const Vector& r);

}  // namespace fy
