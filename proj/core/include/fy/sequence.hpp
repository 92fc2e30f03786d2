#pragma once

#include <vector>

#include "fy/types.hpp"

namespace fy {

/// Potentials for a linear chain with n timesteps and m states, stored as an
/// n x m x m tensor: theta(t, i, j) scores moving from state j at time t-1
/// to state i at time t. The first slice plays the start role: paths are
/// encoded with their t=0 entry in column j=0, and validate() requires that
/// slice to be constant across j.
struct SequencePotentials {
  int n = 0;
  int m = 0;
  Vector theta;

  static SequencePotentials zeros(int n, int m);
  static SequencePotentials from_vector(int n, int m, Vector theta);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(n) * m * m; }
  Eigen::Index index(int t, int i, int j) const {
    return (static_cast<Eigen::Index>(t) * m + i) * m + j;
  }
  double at(int t, int i, int j) const { return theta(index(t, i, j)); }
  double& at(int t, int i, int j) { return theta(index(t, i, j)); }

  void validate() const;
};

/// Binary tensor encoding of a state sequence (t=0 entry in column 0).
Vector encode_path(int n, int m, const std::vector<int>& states);

/// Decodes a path tensor back to states; throws InvalidStructure if y is not
/// a consistent path indicator.
std::vector<int> decode_path(int n, int m, const Vector& y);

/// Max-score path, O(n m^2); ties break toward the lower state index.
Vector viterbi_map(const SequencePotentials& pot);

struct Marginals {
  Vector mu;       // pairwise marginals, same layout as the potentials
  double log_z;    // log partition function
};

/// Forward-backward in log space.
Marginals forward_backward(const SequencePotentials& pot);

/// log Z - <theta, y> and its gradient marginals - y.
ValueGrad crf_loss(const SequencePotentials& pot, const Vector& y);

}  // namespace fy
