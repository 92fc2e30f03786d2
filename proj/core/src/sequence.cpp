#include "fy/sequence.hpp"

#include <cmath>
#include <limits>

namespace fy {

namespace {

double lse2(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

SequencePotentials SequencePotentials::zeros(int n, int m) {
  return from_vector(n, m, Vector::Zero(static_cast<Eigen::Index>(n) * m * m));
}

SequencePotentials SequencePotentials::from_vector(int n, int m, Vector theta) {
  if (n < 1 || m < 2) throw std::invalid_argument("sequence needs n >= 1 and m >= 2");
  if (theta.size() != static_cast<Eigen::Index>(n) * m * m) {
    throw std::invalid_argument("potential tensor size does not match n*m*m");
  }
  SequencePotentials pot;
  pot.n = n;
  pot.m = m;
  pot.theta = std::move(theta);
  return pot;
}

void SequencePotentials::validate() const {
  detail::require_finite(theta, "sequence potentials");
  for (int i = 0; i < m; ++i) {
    for (int j = 1; j < m; ++j) {
      if (at(0, i, j) != at(0, i, 0)) {
        throw InvalidStructure("first potential slice must be constant across the start column");
      }
    }
  }
}

Vector encode_path(int n, int m, const std::vector<int>& states) {
  if (static_cast<int>(states.size()) != n) throw std::invalid_argument("path length != n");
  Vector y = Vector::Zero(static_cast<Eigen::Index>(n) * m * m);
  for (int t = 0; t < n; ++t) {
    const int i = states[t];
    if (i < 0 || i >= m) throw std::invalid_argument("state index out of range");
    const int j = t == 0 ? 0 : states[t - 1];
    y((static_cast<Eigen::Index>(t) * m + i) * m + j) = 1.0;
  }
  return y;
}

std::vector<int> decode_path(int n, int m, const Vector& y) {
  if (y.size() != static_cast<Eigen::Index>(n) * m * m) {
    throw InvalidStructure("path tensor size does not match n*m*m");
  }
  std::vector<int> states(n, -1);
  for (int t = 0; t < n; ++t) {
    int hits = 0;
    int state = -1, prev = -1;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double v = y((static_cast<Eigen::Index>(t) * m + i) * m + j);
        if (v == 1.0) {
          ++hits;
          state = i;
          prev = j;
        } else if (v != 0.0) {
          throw InvalidStructure("path tensor must be binary");
        }
      }
    }
    if (hits != 1) throw InvalidStructure("path tensor must have exactly one entry per timestep");
    if (t == 0 && prev != 0) throw InvalidStructure("first step must sit in the start column");
    if (t > 0 && prev != states[t - 1]) {
      throw InvalidStructure("path tensor transitions are inconsistent");
    }
    states[t] = state;
  }
  return states;
}

Vector viterbi_map(const SequencePotentials& pot) {
  const int n = pot.n, m = pot.m;
  std::vector<double> score(m), next(m);
  std::vector<std::vector<int>> back(n, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i) score[i] = pot.at(0, i, 0);
  for (int t = 1; t < n; ++t) {
    for (int i = 0; i < m; ++i) {
      double best = score[0] + pot.at(t, i, 0);
      int arg = 0;
      for (int j = 1; j < m; ++j) {
        const double s = score[j] + pot.at(t, i, j);
        if (s > best) {  // strict: ties keep the lower j
          best = s;
          arg = j;
        }
      }
      next[i] = best;
      back[t][i] = arg;
    }
    score.swap(next);
  }
  int last = 0;
  for (int i = 1; i < m; ++i) {
    if (score[i] > score[last]) last = i;
  }
  std::vector<int> states(n);
  states[n - 1] = last;
  for (int t = n - 1; t > 0; --t) states[t - 1] = back[t][states[t]];
  return encode_path(n, m, states);
}

Marginals forward_backward(const SequencePotentials& pot) {
  const int n = pot.n, m = pot.m;
  Matrix alpha(n, m), beta(n, m);
  std::vector<double> buf(m);
  for (int i = 0; i < m; ++i) alpha(0, i) = pot.at(0, i, 0);
  for (int t = 1; t < n; ++t) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) buf[j] = alpha(t - 1, j) + pot.at(t, i, j);
      alpha(t, i) = lse2(buf);
    }
  }
  for (int i = 0; i < m; ++i) buf[i] = alpha(n - 1, i);
  const double log_z = lse2(buf);

  for (int i = 0; i < m; ++i) beta(n - 1, i) = 0.0;
  for (int t = n - 2; t >= 0; --t) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) buf[i] = pot.at(t + 1, i, j) + beta(t + 1, i);
      beta(t, j) = lse2(buf);
    }
  }

  Marginals out;
  out.log_z = log_z;
  out.mu = Vector::Zero(pot.dim());
  for (int i = 0; i < m; ++i) {
    out.mu(pot.index(0, i, 0)) = std::exp(alpha(0, i) + beta(0, i) - log_z);
  }
  for (int t = 1; t < n; ++t) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        out.mu(pot.index(t, i, j)) =
            std::exp(alpha(t - 1, j) + pot.at(t, i, j) + beta(t, i) - log_z);
      }
    }
  }
  return out;
}

ValueGrad crf_loss(const SequencePotentials& pot, const Vector& y) {
  (void)decode_path(pot.n, pot.m, y);  // feasibility check
  Marginals marg = forward_backward(pot);
  ValueGrad out;
  out.value = marg.log_z - pot.theta.dot(y);
  if (out.value < 0.0 && out.value > -1e-10) out.value = 0.0;
  out.grad = marg.mu - y;
  return out;
}

}  // namespace fy
