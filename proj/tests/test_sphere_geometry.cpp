#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "crlhls/density_field.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/plh_basis.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/sphere_geometry.hpp"

using namespace crlhls;

namespace {

constexpr double pi = std::numbers::pi;

// Hopf-coordinate beta integral: (2 pi)^2 * 1/2 * B(a+1, b+1) when the phases cancel.
double monomial_oracle(int a, int b, int c, int d) {
  if (a != c || b != d) return 0.0;
  return 2.0 * pi * pi * std::beta(a + 1.0, b + 1.0);
}

double integrate_monomial(const QuadratureGrid& g, int a, int b, int c, int d, bool imag) {
  std::vector<double> f(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const SpherePoint& p = g.nodes()[n];
    const cplx v = ipow(p.z1, a) * ipow(p.z2, b) * ipow(std::conj(p.z1), c) *
                   ipow(std::conj(p.z2), d);
    f[n] = imag ? v.imag() : v.real();
  }
  return g.integrate(f);
}

}  // namespace

TEST_CASE("sphere_distance examples") {
  const SpherePoint e1 = SpherePoint::make(1.0, 0.0);
  CHECK(sphere_distance(e1, e1) == 0.0);
  CHECK(sphere_distance(e1, SpherePoint::make(-1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sphere_distance(e1, SpherePoint::make(cplx(0, 1), 0.0)) ==
        doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-15));
}

TEST_CASE("sphere points off the unit sphere are rejected") {
  CHECK_THROWS_AS(SpherePoint::make(1.0, 0.1), InvalidArgument);
  CHECK_NOTHROW(SpherePoint::make(1.0 + 1e-10, 0.0));
  CHECK_THROWS_AS(sphere_distance(SpherePoint{1.01, 0.0}, SpherePoint{1.0, 0.0}), InvalidArgument);
}

TEST_CASE("distance axioms on sampled triples") {
  auto rng = seeded_engine(11, 0);
  for (int k = 0; k < 200; ++k) {
    const SpherePoint p = random_sphere_point(rng);
    const SpherePoint q = random_sphere_point(rng);
    const SpherePoint r = random_sphere_point(rng);
    CHECK(sphere_distance(p, q) == sphere_distance(q, p));
    CHECK(sphere_distance(p, p) <= 1e-12);
    CHECK(sphere_distance(p, q) > 1e-12);
    // sqrt|1 - <p,q>| is a metric on S^3.
    CHECK(sphere_distance(p, r) <= sphere_distance(p, q) + sphere_distance(q, r) + 1e-12);
  }
}

TEST_CASE("grid total weight and low-order integrals") {
  for (auto [ne, na] : {std::pair{1, 2}, {3, 8}, {8, 20}, {13, 50}}) {
    const QuadratureGrid g = QuadratureGrid::build(ne, na);
    std::vector<double> one(g.size(), 1.0);
    CHECK(std::abs(g.integrate(one) - 2 * pi * pi) < 1e-10);
    double wsum = 0.0;
    for (double w : g.weights()) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 2 * pi * pi) < 1e-10);
  }
  const QuadratureGrid g = QuadratureGrid::build(4, 10);
  CHECK(std::abs(integrate_monomial(g, 1, 0, 1, 0, false) - pi * pi) < 1e-10);
  CHECK(std::abs(integrate_monomial(g, 1, 0, 0, 0, false)) < 1e-12);
  CHECK(std::abs(integrate_monomial(g, 1, 0, 0, 0, true)) < 1e-12);
}

TEST_CASE("grid exactness on random monomials") {
  const QuadratureGrid g = QuadratureGrid::build(6, 22);
  const int deg = g.exactness_degree();
  CHECK(deg >= std::min(2 * 6 - 1, 22 - 1));
  auto rng = seeded_engine(5, 0);
  std::uniform_int_distribution<int> pick(0, deg);
  for (int k = 0; k < 200; ++k) {
    int e[4];
    int total;
    do {
      total = 0;
      for (int& x : e) total += (x = pick(rng) / 2);
    } while (total > deg);
    // Every fourth sample forces a nonvanishing (a = c, b = d) monomial.
    if (k % 4 == 0) {
      e[2] = e[0];
      e[3] = e[1];
      if (2 * (e[0] + e[1]) > deg) e[0] = e[2] = 0;
    }
    const double oracle = monomial_oracle(e[0], e[1], e[2], e[3]);
    CHECK(std::abs(integrate_monomial(g, e[0], e[1], e[2], e[3], false) - oracle) < 1e-10);
    CHECK(std::abs(integrate_monomial(g, e[0], e[1], e[2], e[3], true)) < 1e-10);
    CHECK(std::abs(monomial_integral(e[0], e[1], e[2], e[3]) - oracle) < 1e-12 * (1 + oracle));
  }
}

TEST_CASE("for_degree meets the requested exactness with even n_angle") {
  for (int d : {0, 1, 5, 16, 33, 64}) {
    const QuadratureGrid g = QuadratureGrid::for_degree(d);
    CHECK(g.exactness_degree() >= d);
    CHECK(g.n_angle() % 2 == 0);
  }
}

TEST_CASE("grid construction rejects nonpositive sizes") {
  CHECK_THROWS_AS(QuadratureGrid::build(0, 4), InvalidArgument);
  CHECK_THROWS_AS(QuadratureGrid::build(3, 0), InvalidArgument);
  CHECK_THROWS_AS(QuadratureGrid::build(-1, -1), InvalidArgument);
}

TEST_CASE("grid serialization") {
  const QuadratureGrid g = QuadratureGrid::build(3, 6);
  std::ostringstream csv;
  g.write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("# exactness_degree=5", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + static_cast<long>(g.size()));

  std::stringstream bin;
  g.write_binary(bin);
  const QuadratureGrid h = QuadratureGrid::read_binary(bin);
  CHECK(h.size() == g.size());
  CHECK(h.exactness_degree() == g.exactness_degree());
  std::stringstream bad("garbage");
  CHECK_THROWS_AS(QuadratureGrid::read_binary(bad), InvalidArgument);
}

TEST_CASE("jacobian of sphere automorphisms") {
  const SpherePoint e1 = SpherePoint::make(1.0, 0.0);
  AutSphereParams id;
  CHECK(jacobian_sphere_automorphism(id, e1) == 1.0);
  CHECK(jacobian_sphere_automorphism(id, SpherePoint::from_hopf(0.3, 1.0, 2.0)) == 1.0);
  AutSphereParams p;
  p.w1 = 0.5;
  CHECK(jacobian_sphere_automorphism(p, e1) == doctest::Approx(16.0).epsilon(1e-15));
  AutSphereParams bad;
  bad.w1 = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.w1 = 0.0;
  bad.scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("normalize_to_volume") {
  GridPtr g = make_grid(12, 48);
  const DensityField two = constant_field(g, 2.0);
  const DensityField one = normalize_to_volume(two, 2 * pi * pi);
  for (double v : one.values()) CHECK(std::abs(v - 1.0) < 1e-13);

  AutSphereParams p;
  p.w1 = 0.5;
  const DensityField jk = normalize_to_volume(jacobian_field(g, p), 2 * pi * pi);
  CHECK(std::abs(jk.volume() - 2 * pi * pi) < 1e-12);
  const DensityField twice = normalize_to_volume(jk, 2 * pi * pi);
  for (std::size_t n = 0; n < jk.size(); ++n) CHECK(std::abs(twice[n] - jk[n]) < 1e-13 * jk[n]);

  std::vector<double> v(g->size(), 1.0);
  v[3] = 0.0;
  CHECK_THROWS_AS(DensityField(g, v), InvalidArgument);
  bool clamped = false;
  const DensityField c = clamp_and_normalize(g, v, 2 * pi * pi, &clamped);
  CHECK(clamped);
  CHECK(c[3] > 0.0);
}

TEST_CASE("normalized |J_k| is positive with pluriharmonic logarithm") {
  const int J = 40;
  GridPtr g = make_grid(22, 86);
  REQUIRE(g->exactness_degree() >= 2 * J);
  auto rng = seeded_engine(17, 0);
  for (int k = 0; k < 20; ++k) {
    const AutSphereParams p = random_automorphism(rng, 0.5);
    const DensityField F = jacobian_field(g, p);
    CHECK(std::abs(F.volume() - 2 * pi * pi) < 1e-10);
    std::vector<double> lf = F.log_values();
    const std::vector<double> back = synthesize(project_tau(*g, lf, J), *g);
    for (std::size_t n = 0; n < lf.size(); ++n) lf[n] = (lf[n] - back[n]) * (lf[n] - back[n]);
    CHECK(std::sqrt(g->integrate(lf)) <= 1e-8);
  }
}
