#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "crlhls/constants.hpp"
#include "crlhls/density_field.hpp"
#include "crlhls/plh_basis.hpp"

namespace crlhls {

/// Terms of J(F) = mass + entropy - quadratic on the sphere.
struct FunctionalBreakdown {
  double mass_term = 0.0;       // m_0 V_F
  double entropy_term = 0.0;    // (gamma_3 / 4) int F ln F
  double quadratic_term = 0.0;  // (1 / V_F) int F A^{-1} tau F
  double total = 0.0;
  double volume = 0.0;
};

/// int F ln F dv.
double entropy(const DensityField& F);

/// int F A^{-1} tau G dv, symmetric in F and G.
double quadratic_form(const DensityField& F, const DensityField& G, int J);

/// (1 / V_F) int F A^{-1} tau F dv.
double quadratic(const DensityField& F, int J);

FunctionalBreakdown j_functional(const DensityField& F, int J);

/// entropy_term - quadratic_term; throws InvalidArgument unless |V_F - V| <= 1e-10.
double lhls_residual(const DensityField& F, int J);

/// J_eps with ((1 - eps) lambda_1^eps / V_F) int F A^{-1-eps} tau F as the
/// quadratic part; requires 0 < eps < 1.
double j_epsilon(const DensityField& F, double eps, int J);

/// Quadratic part of J_eps alone.
double quadratic_epsilon(const DensityField& F, double eps, int J);

/// kappa (1/V) <u, A u> + mean(u) - ln mean(e^u), with e^u averaged on the grid.
double mt_residual(const PlhCoefficients& u, const QuadratureGrid& grid,
                   double kappa = kMoserTrudingerKappa);

/// Least-squares kappa making the gradient of mt_residual vanish at
/// u = ln|J_k| for every parameter in `family`.
double calibrate_mt_kappa(const std::vector<AutSphereParams>& family, GridPtr grid, int J);

/// max over nodes p of (int_{d(p, y) < delta} F dv) / V_F.
double concentration_ratio(const DensityField& F, double delta);

/// Empirical sup of quadratic - entropy_term over the samples.
double weak_constant_probe(const std::vector<DensityField>& samples, int J);

/// (gamma_3/8)(sigma_R Ent_rel(Q) + sigma_Q Ent_rel(R)) - (1/V) int Q A^{-1} tau R
/// with sigma_F = V_F / V and Ent_rel(Q) = int Q ln(Q / sigma_Q).
double bilinear_lhls_gap(const DensityField& Q, const DensityField& R, int J);

/// max |A^{-1} tau F| / entropy_term; a monitored ratio, not a bound.
double potential_sup_ratio(const DensityField& F, int J);

struct SweepRow {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  double volume = 0.0;
  double entropy = 0.0;
  double quadratic = 0.0;
  double residual = 0.0;
  double ratio = 0.0;  // quadratic / entropy_term
};

struct SweepConfig {
  std::uint64_t seed = 0;
  int count = 100;
  int degree = 6;
  double amplitude = 2.0;
  int J = 12;
};

/// LHLS residuals of normalized exp(u) samples; row k depends only on (seed, k).
std::vector<SweepRow> lhls_sweep(GridPtr grid, const SweepConfig& config);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
nlohmann::json sweep_summary(const std::vector<SweepRow>& rows);

}  // namespace crlhls
