#pragma once

#include <string>

#include "fy/types.hpp"

namespace fy {

/// One-vs-all regularizers over the nonnegative cone: Omega(m) = sum phi(m_j).
/// Squared: phi = t^2/2; FermiDirac: binary Shannon on [0,1];
/// Tsallis2: t^2 - t on [0,1] ("sparse sigmoid" prediction).
enum class OvaPhi { Squared, FermiDirac, Tsallis2 };

OvaPhi parse_ova_phi(const std::string& text);  // squared | fermi-dirac | sparse-sigmoid
std::string ova_phi_name(OvaPhi phi);

/// Coordinate-wise prediction over R_+^d: [theta]_+, sigmoid(theta), or
/// clamp((theta+1)/2, 0, 1).
Vector ova_predict(OvaPhi phi, const Vector& theta);

/// sum_j phi*(theta_j) + phi(y_j) - theta_j y_j. Targets must satisfy
/// y_j >= 0 (Squared) or y_j in [0,1] (FermiDirac, Tsallis2).
double ova_loss(OvaPhi phi, const Vector& theta, const Vector& y);

/// Gradient of ova_loss in theta: ova_predict(theta) - y.
Vector ova_loss_grad(OvaPhi phi, const Vector& theta, const Vector& y);

}  // namespace fy
