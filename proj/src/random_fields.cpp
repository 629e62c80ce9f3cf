#include "crlhls/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "crlhls/errors.hpp"

namespace crlhls {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PlhCoefficients random_pluriharmonic(std::mt19937_64& rng, int degree, int J) {
  if (degree < 1 || J < degree) throw InvalidArgument("random_pluriharmonic: need 1 <= degree <= J");
  std::normal_distribution<double> normal;
  PlhCoefficients u(J);
  for (int j = 1; j <= degree; ++j) {
    for (int a = 0; a <= j; ++a) {
      const double re = normal(rng);
      const double im = normal(rng);
      u.holo(a, j - a) = cplx(re, im) / static_cast<double>(j);
    }
  }
  return u;
}

PlhCoefficients random_bounded_pluriharmonic(std::uint64_t seed, std::uint64_t index, int degree,
                                             double amplitude, const QuadratureGrid& grid, int J) {
  std::mt19937_64 rng = seeded_engine(seed, index);
  PlhCoefficients u = random_pluriharmonic(rng, degree, J);
  const std::vector<double> v = synthesize(u, grid);
  double sup = 0.0;
  for (double x : v) sup = std::max(sup, std::abs(x));
  u *= amplitude / sup;
  return u;
}

DensityField random_density(GridPtr grid, std::uint64_t seed, std::uint64_t index, int degree,
                            double amplitude, double volume) {
  const PlhCoefficients u =
      random_bounded_pluriharmonic(seed, index, degree, amplitude, *grid, degree);
  return normalize_to_volume(exp_field(std::move(grid), u), volume);
}

AutSphereParams random_automorphism(std::mt19937_64& rng, double max_norm) {
  if (!(max_norm >= 0.0 && max_norm < 1.0)) {
    throw InvalidArgument("random_automorphism: max_norm must lie in [0, 1)");
  }
  const SpherePoint dir = random_sphere_point(rng);
  std::uniform_real_distribution<double> unif(0.0, max_norm);
  const double r = unif(rng);
  return AutSphereParams::normalized(r * dir.z1, r * dir.z2);
}

SpherePoint random_sphere_point(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double x[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& c : x) {
      c = normal(rng);
      n2 += c * c;
    }
  } while (n2 < 1e-20);
  const double s = 1.0 / std::sqrt(n2);
  return SpherePoint{cplx(x[0] * s, x[1] * s), cplx(x[2] * s, x[3] * s)};
}

}  // namespace crlhls
