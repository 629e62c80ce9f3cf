// One PASS/FAIL line per acceptance criterion; exit status 1 if any gated criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "crlhls/cli.hpp"
#include "crlhls/constants.hpp"
#include "crlhls/functionals.hpp"
#include "crlhls/heisenberg.hpp"
#include "crlhls/mass_green.hpp"
#include "crlhls/minimizer.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/spectral_ops.hpp"

using namespace crlhls;

namespace {

using Clock = std::chrono::steady_clock;

bool g_all_pass = true;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, const char* name, bool pass, const std::string& detail, bool gated = true) {
  std::printf("criterion %d %-34s %s  %s\n", id, name, pass ? "PASS" : (gated ? "FAIL" : "FAIL (non-fatal)"),
              detail.c_str());
  std::fflush(stdout);
  if (gated && !pass) g_all_pass = false;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

GridPtr degree_grid(int d) { return std::make_shared<const QuadratureGrid>(QuadratureGrid::for_degree(d)); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_coeff_diff(const PlhCoefficients& a, const PlhCoefficients& b) {
  double d = std::abs(a.constant() - b.constant());
  const std::size_t n = std::max(a.holomorphic().size(), b.holomorphic().size());
  for (std::size_t k = 0; k < n; ++k) {
    const cplx x = k < a.holomorphic().size() ? a.holomorphic()[k] : 0.0;
    const cplx y = k < b.holomorphic().size() ? b.holomorphic()[k] : 0.0;
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

void criterion1() {
  const auto t0 = Clock::now();
  cli::RunConfig c;
  c.command = "constants";
  c.out = (std::filesystem::temp_directory_path() / "crlhls_acceptance").string();
  const cli::CommandResult r = cli::run(c);
  const double pi = 3.14159265358979323846;
  const double g3 = r.summary["gamma3"].get<double>();
  const double m0 = r.summary["mass"].get<double>();
  const double ex = r.summary["mass_spectral_extrapolated"].get<double>();
  const double e1 = rel(g3, 1.0 / (4.0 * pi * pi));
  const double e2 = rel(m0, std::log(2.0) / (8.0 * pi * pi));
  const double e3 = std::abs(ex - m0);
  const double t = elapsed(t0);
  report(1, "constants", e1 < 5e-13 && e2 < 5e-13 && e3 <= 1e-3 && t < 10.0,
         fmt("rel(gamma3)=%.1e rel(m0)=%.1e |spectral J=200 - m0|=%.2e (tol 1e-3) t=%.2fs", e1, e2, e3, t));
}

void criterion2() {
  const auto t0 = Clock::now();
  const QuadratureGrid g = QuadratureGrid::for_degree(24);
  const std::size_t N = g.size();
  const std::vector<double> ones(N, 1.0);
  double mean = 0.0;
#pragma omp parallel for reduction(max : mean)
  for (std::size_t n = 0; n < N; ++n) mean = std::max(mean, std::abs(green_grid_integral(g, n, ones)) / kVolume);

  double sym = 0.0, spec = 0.0, spec_generic = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : sym, spec, spec_generic)
  for (std::size_t m = 0; m < N; ++m) {
    const SpherePoint& p = g.nodes()[m];
    for (std::size_t n = m + 1; n < N; ++n) {
      const SpherePoint& q = g.nodes()[n];
      const double d = sphere_distance(p, q);
      if (d < 1e-12) continue;
      const double G = green_sphere(p, q);
      sym = std::max(sym, std::abs(G - green_sphere(q, p)));
      if (d >= 0.5) {
        const double e = std::abs(green_spectral(p, q, 200) - G);
        spec = std::max(spec, e);
        if (std::abs(hermitian(p, q)) < 0.95) spec_generic = std::max(spec_generic, e);
      }
    }
  }
  // Informational: singularity-adapted quadrature of the same mean.
  double adapted = 0.0;
  for (std::size_t n = 0; n < N; n += N / 16) {
    adapted = std::max(adapted, std::abs(green_adapted_integral(g.nodes()[n], [](const SpherePoint&) { return 1.0; })) / kVolume);
  }
  report(2, "Green conventions", mean <= 1e-8 && sym <= 1e-8 && spec <= 1e-6,
         fmt("grid mean-zero=%.2e sym=%.1e spectral(d>=0.5)=%.2e [generic pairs %.1e]", mean, sym, spec, spec_generic) +
             fmt(" adapted mean-zero=%.1e t=%.1fs", adapted, elapsed(t0)));
}

void criterion3() {
  const auto t0 = Clock::now();
  const int J = 16;
  GridPtr g = degree_grid(2 * J);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const DensityField F = random_density(g, 3, k, 6, 2.0);
    const double lhs = mass_transform(F, J).total_mass - kSphereTotalMass;
    worst = std::max(worst, std::abs(lhs - lhls_residual(F, J)));
  }
  const double t = elapsed(t0);
  report(3, "mass-difference identity", worst <= 1e-10 && t < 60.0, fmt("max gap=%.2e (tol 1e-10) t=%.1fs", worst, t));
}

void criterion4() {
  const auto t0 = Clock::now();
  SweepConfig cfg;
  cfg.seed = 7;
  GridPtr g = degree_grid(2 * cfg.J);
  const auto rows = lhls_sweep(g, cfg);
  double min_res = rows.front().residual;
  for (const auto& r : rows) min_res = std::min(min_res, r.residual);

  const int J = 24;
  GridPtr ge = degree_grid(2 * J);
  std::mt19937_64 rng = seeded_engine(4, 0);
  double extremal = 0.0;
  for (int k = 0; k < 10; ++k) {
    const AutSphereParams p = random_automorphism(rng, 0.7);
    extremal = std::max(extremal, std::abs(lhls_residual(normalize_to_volume(jacobian_field(ge, p), kVolume), J)));
  }
  report(4, "sphere LHLS", min_res >= -1e-9 && extremal <= 1e-6,
         fmt("sweep min residual=%.3e (>= -1e-9), max |residual| on |J_k|=%.2e (tol 1e-6) t=%.1fs", min_res, extremal,
             elapsed(t0)));
}

double head_sum(const DensityField& F, int J) {
  double s = 0.0;
  for (double l : conformal_eigenvalues(F, J, 4)) s += 1.0 / l;
  return s;
}

void criterion5() {
  const auto t0 = Clock::now();
  // Ritz values bound the eigenvalues from above; J = 12 undershoots 0.25 by 8e-9 at |w| = 0.5.
  const int J = 20;
  GridPtr g = degree_grid(2 * J + 16);
  std::mt19937_64 rng = seeded_engine(5, 0);
  double worst = 1.0;
  for (int k = 0; k < 20; ++k) {
    worst = std::min(worst, head_sum(normalize_to_volume(jacobian_field(g, random_automorphism(rng, 0.5)), kVolume), J));
    worst = std::min(worst, head_sum(random_density(g, 5, k, 4, 1.5), J));
  }
  const double at_one = std::abs(head_sum(constant_field(g, 1.0), J) - 0.25);
  report(5, "truncated eigenvalue inequality", worst >= 0.25 - 1e-9 && at_one <= 1e-9,
         fmt("min sum_{k<=4} 1/lambda_k=%.12f (>= 0.25-1e-9), |F=1 - 0.25|=%.1e t=%.1fs", worst, at_one, elapsed(t0)));
}

void criterion6() {
  const auto t0 = Clock::now();
  const int J = 8;
  GridPtr g = degree_grid(2 * J + 8);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const DensityField F = random_density(g, 6, k, 3, 1.5);
    auto rng = seeded_engine(66, k);
    std::normal_distribution<double> nd;
    std::vector<double> f(g->size());
    for (double& x : f) x = nd(rng);
    worst = std::max(worst, max_coeff_diff(conformal_inverse_apply(F, f, J),
                                           conformal_inverse_galerkin(ConformalFrame::build(F, J), f)));
  }
  const GeometricMass gm = q_prime_and_geometric_mass(*g);
  double q = 0.0, n = 0.0;
  for (double x : gm.q_prime) q = std::max(q, std::abs(x - kSphereQPrime));
  for (double x : gm.mass.mass) n = std::max(n, std::abs(x - kSphereMass));
  const double iq = std::abs(g->integrate(gm.q_prime) - 16.0 * kPi * kPi);
  report(6, "conformal inverse / Q' sphere", worst <= 1e-8 && q <= 1e-8 && n <= 1e-8 && iq <= 1e-8,
         fmt("formula vs Galerkin=%.1e |Q'-8|=%.1e |N-m0|=%.1e |int Q' - 16pi^2|=%.1e", worst, q, n, iq) +
             fmt(" t=%.1fs", elapsed(t0)));
}

void criterion7() {
  const auto t0 = Clock::now();
  MinimizerConfig cfg;
  cfg.degree = 32;
  GridPtr g = degree_grid(2 * cfg.degree);
  const double target = 0.25 * std::log(2.0);
  double dj = 0.0, spread = 0.0, res = -1.0;
  int stagnated = 0;
  for (int k = 0; k < 10; ++k) {
    const PlhCoefficients u = random_bounded_pluriharmonic(7, k, 4, 1.5, *g, cfg.degree);
    const MinimizerState st = minimize(cfg, normalize_to_volume(exp_field(g, u), kVolume));
    const MassReport m = mass_transform(st.F, cfg.degree);
    dj = std::max(dj, std::abs(j_functional(st.F, cfg.degree).total - target));
    spread = std::max(spread, m.max() - m.min());
    res = std::max(res, lhls_residual(st.F, cfg.degree));
    stagnated += st.stagnated ? 1 : 0;
  }
  const double t = elapsed(t0);
  report(7, "minimizer", dj <= 1e-3 && spread <= 1e-3 && res <= 1e-4 && t < 300.0,
         fmt("max |J - ln2/4|=%.1e mass spread=%.1e max residual=%.1e t=%.0fs", dj, spread, res, t) +
             " stagnated=" + std::to_string(stagnated));
}

void criterion8() {
  const auto t0 = Clock::now();
  const auto levels = refinement_study(AutHeisParams{}, default_refinement_levels());
  bool decreasing = true;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (std::abs(levels[k].deficit) > 1.1 * std::abs(levels[k - 1].deficit)) decreasing = false;
  }
  const double desk = std::abs(levels[1].deficit);

  const HeisGrid f = HeisGrid::tensor({4.0, 4.0, 16.0}, 10, 10, 10, 2.0, 3.5)
                         .sampled([](const HeisPoint& x) { return heis_jacobian(AutHeisParams::normalized({1.2, 0.3}, {0.2, -0.1}), x); });
  const double j0 = j_heisenberg(f);
  double scaling = 0.0;
  for (double lam : {0.5, 2.0, 7.0}) scaling = std::max(scaling, std::abs(j_heisenberg(f.dilated(lam)) - j0));

  std::mt19937_64 rng = seeded_engine(8, 0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double cayley_rel = 0.0;
  auto q = [](const HeisPoint& w) {
    const double s = 1.0 + std::norm(w.z);
    return s * s + w.t * w.t;
  };
  for (int k = 0; k < 1000; ++k) {
    const HeisPoint a{cplx(u(rng), u(rng)), u(rng)}, b{cplx(u(rng), u(rng)), u(rng)};
    const double r = koranyi_distance(a, b) * std::pow(4.0 / q(a), 0.25) * std::pow(4.0 / q(b), 0.25);
    cayley_rel = std::max(cayley_rel, std::abs(sphere_distance(cayley(a), cayley(b)) - r));
  }
  report(8, "Heisenberg sharp LHLS", desk <= 1e-2 && decreasing && scaling <= 1e-8 && cayley_rel <= 1e-12,
         fmt("deficits %.2e, %.2e, %.2e", levels[0].deficit, levels[1].deficit, levels[2].deficit) +
             fmt(" scaling=%.1e Cayley relation=%.1e t=%.1fs", scaling, cayley_rel, elapsed(t0)));
}

void criterion9() {
  const auto t0 = Clock::now();
  const int J = 28;
  GridPtr g = degree_grid(2 * J);
  const std::vector<double> sphere = sphere_eigenvalues(J);
  std::mt19937_64 rng = seeded_engine(9, 0);
  double worst[3] = {0.0, 0.0, 0.0};
  const int Ks[3] = {50, 200, 800};
  for (int k = 0; k < 5; ++k) {
    const DensityField F = normalize_to_volume(jacobian_field(g, random_automorphism(rng, 0.5)), kVolume);
    const ConformalFrame frame = ConformalFrame::build(F, J);
    const double rhs = lhls_residual(F, J);
    for (int i = 0; i < 3; ++i) {
      double scale = 0.0;
      for (int m = 0; m < Ks[i]; ++m) scale += 1.0 / sphere[m];
      worst[i] = std::max(worst[i], std::abs(truncated_trace_difference(frame, Ks[i]) - rhs) / scale);
    }
  }
  report(9, "truncated trace trend (exploratory)", worst[2] <= 0.05,
         fmt("|diff - rhs| / sum 1/lambda_k(theta0): K=50 %.1e, K=200 %.1e, K=800 %.1e", worst[0], worst[1], worst[2]) +
             fmt(" t=%.1fs", elapsed(t0)),
         false);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%s\n", g_all_pass ? "ALL GATED CRITERIA PASS" : "SOME GATED CRITERIA FAIL");
  return g_all_pass ? 0 : 1;
}
