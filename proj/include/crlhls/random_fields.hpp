#pragma once

#include <cstdint>
#include <random>

#include "crlhls/constants.hpp"
#include "crlhls/density_field.hpp"
#include "crlhls/plh_basis.hpp"
#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

/// Engine for sample `index` of stream `seed`; independent of evaluation order.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index);

/// Mean-zero pluriharmonic polynomial with standard normal coefficients
/// damped by 1/j, degree <= `degree`, coefficients truncated at J >= degree.
PlhCoefficients random_pluriharmonic(std::mt19937_64& rng, int degree, int J);

/// As above, rescaled so that max over grid nodes of |u| equals amplitude.
PlhCoefficients random_bounded_pluriharmonic(std::uint64_t seed, std::uint64_t index, int degree,
                                             double amplitude, const QuadratureGrid& grid, int J);

/// normalize(exp(u)) for u from random_bounded_pluriharmonic.
DensityField random_density(GridPtr grid, std::uint64_t seed, std::uint64_t index, int degree,
                            double amplitude, double volume = kVolume);

/// Uniform direction, |w| uniform in [0, max_norm], scale normalizing to volume 2 pi^2.
AutSphereParams random_automorphism(std::mt19937_64& rng, double max_norm);

/// Uniformly distributed point of S^3.
SpherePoint random_sphere_point(std::mt19937_64& rng);

}  // namespace crlhls
