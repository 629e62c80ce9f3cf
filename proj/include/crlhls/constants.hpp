#pragma once

#include <numbers>

namespace crlhls {

inline constexpr double kPi = std::numbers::pi;

// Volume of (S^3, theta_0); the round measure normalized so that the Cayley
// pullback of |J_C| against Lebesgue measure on H integrates to the same value.
inline constexpr double kVolume = 2.0 * kPi * kPi;
inline constexpr double kOmega3 = kVolume;

// Coefficient of the logarithmic singularity of the Green's function.
inline constexpr double kGamma3 = 1.0 / (4.0 * kPi * kPi);

// Robin mass of the standard sphere and its total mass V * m.
inline constexpr double kSphereMass = std::numbers::ln2 / (8.0 * kPi * kPi);
inline constexpr double kSphereTotalMass = kVolume * kSphereMass;

// Q'-curvature of the standard contact form (integrates to 16 pi^2).
inline constexpr double kSphereQPrime = 8.0;

// Moser-Trudinger constant in this normalization of A.
inline constexpr double kMoserTrudingerKappa = 1.0 / 32.0;

/// Eigenvalue of A on the degree-j pluriharmonic subspace; zero on constants.
constexpr double eigenvalue(int j) { return 8.0 * j * (j + 1); }

inline constexpr double kFirstEigenvalue = eigenvalue(1);

}  // namespace crlhls
