#pragma once

// Shared kernel for regularized prediction / prox problems of the form
//   argmax_{p in simplex} <p, theta> - sum_j g(p_j)
// with g strictly convex and differentiable. The optimum is p(tau*) with
//   p_j(tau) = (g')^{-1}(max{theta_j - tau, g'(0)})
// and tau* the root of phi(tau) = sum_j p_j(tau) - 1, bracketed by
// [max(theta) - g'(1), max(theta) - g'(1/d)]. After the scalar search the
// support is frozen and tau is polished by Newton steps; a singleton
// support yields the exact vertex.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fy/root_finding.hpp"
#include "fy/types.hpp"

namespace fy::detail {

struct SepResult {
  Vector p;
  double tau = 0.0;
  int iterations = 0;
  long evals = 0;
  bool converged = false;
};

template <class G>
Vector sep_p_of_tau(const G& g, const Vector& theta, double tau) {
  const double lo = g.d0();
  Vector p(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double s = theta(j) - tau;
    p(j) = s <= lo ? 0.0 : g.inv(s);
  }
  return p;
}

template <class G>
SepResult solve_separable_simplex(const G& g, const Vector& theta, bool use_brent, double ftol,
                                  int max_iter, std::vector<Vector>* trace = nullptr,
                                  long max_evals = 0) {
  const Eigen::Index d = theta.size();
  const double theta_max = theta.maxCoeff();
  const double tau_lo = theta_max - g.d1();
  const double tau_hi = theta_max - g.d_at(1.0 / static_cast<double>(d));

  SepResult res;
  auto phi = [&](double tau) {
    Vector p = sep_p_of_tau(g, theta, tau);
    if (trace) trace->push_back(p);
    return p.sum() - 1.0;
  };

  if (!(tau_hi > tau_lo)) {  // degenerate bracket
    res.tau = tau_lo;
    res.p = sep_p_of_tau(g, theta, tau_lo);
    res.converged = true;
    return res;
  }

  const double flo = phi(tau_lo);
  const double fhi = phi(tau_hi);
  res.evals = 2;
  RootResult root;
  if (use_brent) {
    root = brent_root(phi, tau_lo, tau_hi, flo, fhi, ftol, max_iter,
                      max_evals > 0 ? max_evals - res.evals : 0);
  } else {
    root = bisect_root(phi, tau_lo, tau_hi, flo, fhi, ftol, max_iter,
                       max_evals > 0 ? max_evals - res.evals : 0);
  }
  res.evals += root.evals;
  res.iterations = root.iterations;
  res.tau = root.root;
  res.converged = root.converged;
  if (max_evals > 0 && res.evals >= max_evals) {
    res.p = sep_p_of_tau(g, theta, res.tau);
    return res;
  }

  // Freeze the support implied by tau and polish with Newton on the smooth
  // restriction; repeat while the support keeps changing.
  const double gp0 = g.d0();
  std::vector<Eigen::Index> support, prev_support;
  for (int round = 0; round < 64; ++round) {
    support.clear();
    for (Eigen::Index j = 0; j < d; ++j) {
      if (theta(j) - res.tau > gp0) support.push_back(j);
    }
    if (support.empty()) break;
    if (support.size() == 1) {
      // Candidate vertex: tau solving inv(theta_k - tau) = 1 is exact as
      // long as every other coordinate stays clamped there.
      const Eigen::Index k = support[0];
      const double tau_vertex = theta(k) - g.d1();
      bool vertex_ok = true;
      for (Eigen::Index j = 0; j < d && vertex_ok; ++j) {
        if (j != k && theta(j) - tau_vertex > gp0) vertex_ok = false;
      }
      ++res.evals;
      res.tau = tau_vertex;
      if (vertex_ok) {
        res.p = Vector::Zero(d);
        res.p(k) = 1.0;
        res.converged = true;
        if (trace) trace->push_back(res.p);
        return res;
      }
      prev_support = support;
      continue;  // re-derive the support at the vertex threshold
    }
    if (round > 0 && support == prev_support) break;
    for (int it = 0; it < 40; ++it) {
      // Newton on phi itself: coordinates that fall below g'(0) while tau
      // moves contribute zero value and zero slope.
      double psi = -1.0;
      double dpsi = 0.0;
      for (const Eigen::Index j : support) {
        const double s = theta(j) - res.tau;
        if (s <= gp0) continue;
        psi += g.inv(s);
        dpsi -= g.inv_deriv(s);
      }
      ++res.evals;
      if (trace) trace->push_back(sep_p_of_tau(g, theta, res.tau));
      if (std::abs(psi) <= 1e-15 * static_cast<double>(support.size()) || dpsi == 0.0) break;
      double tau_next = res.tau - psi / dpsi;
      tau_next = std::min(std::max(tau_next, tau_lo), tau_hi);
      if (tau_next == res.tau) break;
      res.tau = tau_next;
    }
    prev_support = support;
  }

  res.p = sep_p_of_tau(g, theta, res.tau);
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(d);
  res.converged = std::abs(res.p.sum() - 1.0) <= std::max(ftol, floor);
  return res;
}

}  // namespace fy::detail
