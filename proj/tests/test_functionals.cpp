#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/functionals.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/spectral_ops.hpp"

using namespace crlhls;

namespace {

constexpr double pi = std::numbers::pi;
const double kLn2Over4 = std::log(2.0) / 4.0;

DensityField normalized_jacobian(GridPtr g, const AutSphereParams& a) {
  return normalize_to_volume(jacobian_field(g, a), kVolume);
}

// Volume of {|1 - z1| < rho} on S^3: 2 pi times the lens area of the unit disc
// and the disc of radius rho centred at 1.
double ball_volume(double delta) {
  const double rho = 0.5 * delta * delta;
  const double lens = std::acos(1.0 - 0.5 * rho * rho) + rho * rho * std::acos(0.5 * rho) -
                      0.5 * rho * std::sqrt(4.0 - rho * rho);
  return 2.0 * pi * lens;
}

}  // namespace

TEST_CASE("entropy") {
  GridPtr g = make_grid(8, 26);
  CHECK(entropy(constant_field(g, 1.0)) == 0.0);
  std::vector<double> step(g->size());
  for (std::size_t n = 0; n < step.size(); ++n) step[n] = g->nodes()[n].z1.real() > 0 ? 2.0 : 1e-3;
  CHECK(entropy(normalize_to_volume(DensityField(g, step), kVolume)) > 0.0);
  for (int k = 0; k < 20; ++k) CHECK(entropy(random_density(g, 90, k, 3, 1.0)) >= 0.0);

  GridPtr fine = make_grid(30, 90);
  const DensityField F = normalized_jacobian(fine, AutSphereParams::normalized(0.4, 0.0));
  const double q = quadratic(F, 30);
  CHECK(std::abs(entropy(F) - 4.0 / kGamma3 * q) < 1e-6);
}

TEST_CASE("quadratic term") {
  GridPtr g = make_grid(8, 26);
  const int J = 8;
  CHECK(std::abs(quadratic(constant_field(g, 1.0), J)) < 1e-30);

  // F = 1 + delta e with e = sqrt(2) Re(z2) / ||z2|| a unit degree-1 element
  const double delta = 1e-2;
  const double n = monomial_norm(0, 1);
  std::vector<double> e(g->size()), f(g->size());
  for (std::size_t k = 0; k < g->size(); ++k) {
    e[k] = std::sqrt(2.0) * g->nodes()[k].z2.real() / n;
    f[k] = 1.0 + delta * e[k];
  }
  const DensityField F(g, f);
  std::vector<double> direct(g->size());
  for (std::size_t k = 0; k < g->size(); ++k) direct[k] = f[k] * delta * e[k] / 16.0;
  const double oracle = g->integrate(direct) / F.volume();
  CHECK(std::abs(quadratic(F, J) - oracle) < 1e-16);
  CHECK(std::abs(quadratic(F, J) - delta * delta / (16.0 * kVolume)) < 1e-15);

  for (int k = 0; k < 10; ++k) {
    const DensityField A = random_density(g, 91, k, 3, 1.0);
    const DensityField B = random_density(g, 92, k, 3, 1.0);
    CHECK(quadratic_form(A, B, J) == quadratic_form(B, A, J));
    CHECK(quadratic(A, J) >= 0.0);
  }
}

TEST_CASE("J functional") {
  GridPtr g = make_grid(12, 40);
  const int J = 10;
  const FunctionalBreakdown one = j_functional(constant_field(g, 1.0), J);
  CHECK(std::abs(one.total - kLn2Over4) < 1e-13);
  CHECK(std::abs(one.total - 0.173287) < 1e-6);

  for (int k = 0; k < 20; ++k) {
    const FunctionalBreakdown b = j_functional(random_density(g, 93, k, 4, 1.5), J);
    CHECK(std::abs(b.total - (b.mass_term + b.entropy_term - b.quadratic_term)) < 1e-12);
    CHECK(b.total >= kLn2Over4 - 1e-9);
  }

  GridPtr fine = make_grid(30, 90);
  auto rng = seeded_engine(94, 0);
  for (int k = 0; k < 5; ++k) {
    const DensityField F = normalized_jacobian(fine, random_automorphism(rng, 0.6));
    CHECK(std::abs(j_functional(F, 40).total - kLn2Over4) < 1e-6);
  }
}

TEST_CASE("LHLS residual") {
  GridPtr g = make_grid(14, 50);
  const int J = 16;
  CHECK(std::abs(lhls_residual(constant_field(g, 1.0), J)) < 1e-30);
  CHECK_THROWS_AS(lhls_residual(constant_field(g, 1.1), J), InvalidArgument);

  for (int k = 0; k < 30; ++k) {
    CHECK(lhls_residual(random_density(g, 95, k, 6, 2.0), J) >= -1e-9);
  }

  GridPtr fine = make_grid(30, 90);
  auto rng = seeded_engine(96, 0);
  for (int k = 0; k < 10; ++k) {
    const DensityField F = normalized_jacobian(fine, random_automorphism(rng, 0.7));
    CHECK(std::abs(lhls_residual(F, 44)) <= 1e-6);
  }
}

TEST_CASE("LHLS residual is rotation invariant") {
  GridPtr g = make_grid(16, 50);
  const int J = 12;
  auto rng = seeded_engine(97, 0);
  const PlhCoefficients u = random_bounded_pluriharmonic(97, 0, 3, 1.0, *g, 3);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int k = 0; k < 5; ++k) {
    // U = diag(e^{ia}, e^{ib}) composed with a real rotation by t
    const double a = ang(rng), b = ang(rng), t = ang(rng);
    std::vector<double> f(g->size()), fr(g->size());
    for (std::size_t n = 0; n < g->size(); ++n) {
      const SpherePoint& y = g->nodes()[n];
      const cplx w1 = std::polar(1.0, a) * y.z1, w2 = std::polar(1.0, b) * y.z2;
      const SpherePoint r{std::cos(t) * w1 - std::sin(t) * w2, std::sin(t) * w1 + std::cos(t) * w2};
      f[n] = std::exp(evaluate(u, y));
      fr[n] = std::exp(evaluate(u, r));
    }
    const DensityField F = normalize_to_volume(DensityField(g, f), kVolume);
    const DensityField Fr = normalize_to_volume(DensityField(g, fr), kVolume);
    CHECK(std::abs(lhls_residual(F, J) - lhls_residual(Fr, J)) < 1e-10);
  }
}

TEST_CASE("sub-critical functional") {
  GridPtr g = make_grid(12, 40);
  const int J = 10;
  for (double eps : {0.01, 0.3, 0.9}) {
    CHECK(std::abs(j_epsilon(constant_field(g, 1.0), eps, J) - kLn2Over4) < 1e-13);
  }
  CHECK_THROWS_AS(j_epsilon(constant_field(g, 1.0), 0.0, J), InvalidArgument);
  CHECK_THROWS_AS(j_epsilon(constant_field(g, 1.0), 1.0, J), InvalidArgument);

  for (int k = 0; k < 10; ++k) {
    const DensityField F = random_density(g, 98, k, 4, 1.5);
    const double jf = j_functional(F, J).total;
    CHECK(std::abs(j_epsilon(F, 1e-8, J) - jf) < 1e-8);

    // coefficientwise oracle for J_eps - J
    const PlhCoefficients c = project_tau(*g, F.values(), J);
    for (double eps : {0.05, 0.2, 0.5}) {
      double gap = 0.0;
      for (int j = 1; j <= J; ++j) {
        const double nu = eigenvalue(j);
        double mass = 0.0;
        for (int a = 0; a <= j; ++a) mass += 2.0 * std::norm(c.holo(a, j - a));
        gap += (1.0 - (1.0 - eps) * std::pow(16.0 / nu, eps)) * mass / nu;
      }
      gap /= F.volume();
      CHECK(std::abs((j_epsilon(F, eps, J) - jf) - gap) < 1e-12);
      CHECK(gap >= 0.0);
    }
    // nonincreasing as eps decreases
    double prev = j_epsilon(F, 0.9, J);
    for (double eps : {0.5, 0.2, 0.1, 0.01, 1e-4}) {
      const double cur = j_epsilon(F, eps, J);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("Moser-Trudinger residual and its calibration") {
  GridPtr g = make_grid(30, 90);
  const int J = 40;
  CHECK(std::abs(mt_residual(PlhCoefficients(J), *g)) < 1e-15);

  auto rng = seeded_engine(99, 0);
  std::vector<AutSphereParams> family;
  for (int k = 0; k < 6; ++k) family.push_back(random_automorphism(rng, 0.5));
  const double kappa = calibrate_mt_kappa(family, g, J);
  MESSAGE("calibrated kappa = " << kappa);
  CHECK(std::abs(kappa - 1.0 / 32.0) < 1e-6);

  for (const AutSphereParams& a : family) {
    PlhCoefficients u = log_jacobian_coefficients(a.w1, a.w2, a.scale, J);
    u.set_constant(u.constant() + 0.7);
    CHECK(std::abs(mt_residual(u, *g)) < 1e-5);
  }

  GridPtr mid = make_grid(14, 50);
  for (int k = 0; k < 30; ++k) {
    const PlhCoefficients u = random_bounded_pluriharmonic(100, k, 5, 2.0, *mid, 16);
    const double r = mt_residual(u, *mid);
    CHECK(r >= -1e-8);
    // duality: (gamma_3/4) V R(u) bounds the LHLS residual of V e^u / int e^u
    std::vector<double> f = synthesize(u, *mid);
    for (double& x : f) x = std::exp(x);
    const DensityField F = normalize_to_volume(DensityField(mid, f), kVolume);
    CHECK(0.25 * kGamma3 * kVolume * r >= lhls_residual(F, 16) - 1e-12);
  }
}

TEST_CASE("concentration ratio") {
  GridPtr g = make_grid(8, 24);
  const DensityField one = constant_field(g, 1.0);
  const double r = concentration_ratio(one, 0.5);
  // indicator integration about a single node bounds the max from below
  std::vector<double> ind(g->size());
  for (std::size_t n = 0; n < g->size(); ++n) ind[n] = sphere_distance(g->nodes()[0], g->nodes()[n]) < 0.5;
  CHECK(r >= g->integrate(ind) / kVolume);
  CHECK(r < 1.0);
  // the grid resolves the ball only coarsely
  CHECK(std::abs(r - ball_volume(0.5) / kVolume) < 0.3 * ball_volume(0.5) / kVolume);
  CHECK_THROWS_AS(concentration_ratio(one, 1.0), InvalidArgument);

  GridPtr coarse = make_grid(6, 20);
  double prev = 0.0;
  for (double w : {0.5, 0.9, 0.99}) {
    const double c = concentration_ratio(jacobian_field(coarse, AutSphereParams::normalized(w, 0.0)), 0.5);
    CHECK(c > prev);
    CHECK(c <= 1.0);
    prev = c;
  }
  CHECK(prev > 0.9);
}

TEST_CASE("weak constant and bilinear diagnostics") {
  GridPtr g = make_grid(12, 40);
  const int J = 12;
  CHECK(std::abs(weak_constant_probe({constant_field(g, 1.0)}, J)) < 1e-30);
  std::vector<DensityField> samples;
  for (int k = 0; k < 100; ++k) samples.push_back(random_density(g, 101, k, 4, 1.5));
  CHECK(weak_constant_probe(samples, J) <= 1e-9);

  for (int k = 0; k < 20; ++k) {
    const DensityField Q = random_density(g, 102, k, 3, 1.5, 0.5 * kVolume);
    const DensityField R = random_density(g, 103, k, 3, 1.5, 3.0 * kVolume);
    CHECK(bilinear_lhls_gap(Q, R, J) >= -1e-12);
    CHECK(bilinear_lhls_gap(R, Q, J) == doctest::Approx(bilinear_lhls_gap(Q, R, J)).epsilon(1e-12));
  }
  CHECK(potential_sup_ratio(constant_field(g, 1.0), J) == 0.0);
  CHECK(potential_sup_ratio(random_density(g, 104, 0, 3, 1.0), J) > 0.0);
}

TEST_CASE("LHLS sweep") {
  GridPtr g = make_grid(8, 26);
  SweepConfig cfg;
  cfg.seed = 5;
  cfg.count = 8;
  cfg.degree = 3;
  cfg.amplitude = 1.0;
  cfg.J = 8;
  const auto rows = lhls_sweep(g, cfg);
  const auto again = lhls_sweep(g, cfg);
  REQUIRE(rows.size() == 8);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].residual == again[k].residual);
    CHECK(rows[k].residual >= -1e-9);
    CHECK(rows[k].index == k);
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("seed,index,V_F,entropy,quadratic,residual,ratio\n", 0) == 0);
  const auto s = sweep_summary(rows);
  CHECK(s["count"] == 8);
  CHECK(s["min_residual"].get<double>() <= s["mean_residual"].get<double>());
}
