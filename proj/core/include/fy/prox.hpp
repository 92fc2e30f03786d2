#pragma once

#include "fy/predict.hpp"
#include "fy/types.hpp"

namespace fy {

enum class ProxKind { Squared, Perceptron, Sparsemax, CostHinge, NegShannon, NegTsallis15 };

/// Regularizers with a supported proximity operator:
///   Squared:        1/2 ||.||^2 over R^d
///   Perceptron:     indicator of the simplex
///   Sparsemax:      1/2 ||.||^2 restricted to the simplex
///   CostHinge(c):   simplex indicator minus <c, .>
///   NegShannon:     negative Shannon entropy over the simplex
///   NegTsallis15:   negative 1.5-Tsallis entropy over the simplex
class ProxSpec {
 public:
  static ProxSpec squared() { return ProxSpec(ProxKind::Squared); }
  static ProxSpec perceptron() { return ProxSpec(ProxKind::Perceptron); }
  static ProxSpec sparsemax() { return ProxSpec(ProxKind::Sparsemax); }
  static ProxSpec cost_hinge(Vector c);
  static ProxSpec neg_shannon() { return ProxSpec(ProxKind::NegShannon); }
  static ProxSpec neg_tsallis15() { return ProxSpec(ProxKind::NegTsallis15); }

  ProxKind kind() const { return kind_; }
  const Vector& cost() const { return cost_; }

 private:
  explicit ProxSpec(ProxKind k) : kind_(k) {}
  ProxKind kind_;
  Vector cost_;
};

/// The unique omega > 0 with omega + log(omega) = z, by safeguarded Newton;
/// residual at most 1e-12 for moderate z (relative for huge |z|).
double wright_omega(double z);

/// prox_{tau * Omega}(eta) = argmin_mu 1/2 ||mu - eta||^2 + tau * Omega(mu).
/// Closed forms for the first four kinds; scalar root finding for the
/// entropic kinds. The entropic subproblem restricted to the simplex is
/// argmax <p, eta> - sum_j g(p_j) with g(t) = t^2/2 - h(t)/sigma and
/// sigma = 1/tau, so it reuses the separable prediction solver with the
/// closed-form (g')^{-1}: the Wright omega function for Shannon, the minus
/// branch x + 2(1 - sqrt(1 + sigma^2 x))/sigma^2 for 1.5-Tsallis.
/// tau = 0 degenerates to the projection onto dom(Omega).
Vector prox(const ProxSpec& spec, double tau, const Vector& eta, const SolverConfig& cfg = {});

/// The same operator through the scaled Moreau decomposition
///   prox_{tau Omega}(eta) = eta - tau * prox_{Omega*/tau}(eta / tau),
/// with the inner prox solved by gradient descent on the smooth
/// unconstrained problem using grad Omega* = yhat_Omega (strictly convex
/// kinds), or through the support-function prox for the polyhedral kinds.
/// Used as an independent cross-check of prox.
Vector moreau_decompose(const ProxSpec& spec, double tau, const Vector& eta,
                        const SolverConfig& cfg = {});

}  // namespace fy
