#include "crlhls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "crlhls/errors.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/spectral_ops.hpp"

namespace crlhls {

namespace {

constexpr double kVolumeTolerance = 1e-10;

PlhCoefficients coefficients(const DensityField& F, int J) {
  return project_tau(F.grid(), F.values(), J);
}

double entropy_term(const DensityField& F) { return 0.25 * kGamma3 * entropy(F); }

}  // namespace

double entropy(const DensityField& F) {
  std::vector<double> f(F.size());
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = F[n] * std::log(F[n]);
  return F.grid().integrate(f);
}

double quadratic_form(const DensityField& F, const DensityField& G, int J) {
  if (F.size() != G.size()) {
    throw InvalidArgument("quadratic_form: fields live on different grids");
  }
  return apply_A_inverse(coefficients(F, J)).dot(coefficients(G, J));
}

double quadratic(const DensityField& F, int J) {
  const PlhCoefficients c = coefficients(F, J);
  return apply_A_inverse(c).dot(c) / F.volume();
}

FunctionalBreakdown j_functional(const DensityField& F, int J) {
  FunctionalBreakdown b;
  b.volume = F.volume();
  b.mass_term = kSphereMass * b.volume;
  b.entropy_term = entropy_term(F);
  b.quadratic_term = quadratic(F, J);
  b.total = b.mass_term + b.entropy_term - b.quadratic_term;
  return b;
}

double lhls_residual(const DensityField& F, int J) {
  if (!(std::abs(F.volume() - kVolume) <= kVolumeTolerance)) {
    throw InvalidArgument("lhls_residual: V_F differs from V; normalize first");
  }
  return entropy_term(F) - quadratic(F, J);
}

double quadratic_epsilon(const DensityField& F, double eps, int J) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("j_epsilon: eps must be in (0, 1)");
  const PlhCoefficients c = coefficients(F, J);
  const double weight = (1.0 - eps) * std::pow(kFirstEigenvalue, eps);
  return weight * apply_A_fracpower(1.0 + eps, c).dot(c) / F.volume();
}

double j_epsilon(const DensityField& F, double eps, int J) {
  return kSphereMass * F.volume() + entropy_term(F) - quadratic_epsilon(F, eps, J);
}

double mt_residual(const PlhCoefficients& u, const QuadratureGrid& grid, double kappa) {
  std::vector<double> e = synthesize(u, grid);
  for (double& x : e) x = std::exp(x);
  const double mean_exp = grid.integrate(e) / kVolume;
  return kappa * apply_A(u).dot(u) / kVolume + u.mean() - std::log(mean_exp);
}

double calibrate_mt_kappa(const std::vector<AutSphereParams>& family, GridPtr grid, int J) {
  if (family.empty()) throw InvalidArgument("calibrate_mt_kappa: empty family");
  // Stationarity at u = ln F: 2 kappa A u = V F / V_F - 1.
  double num = 0.0, den = 0.0;
  for (const AutSphereParams& params : family) {
    const DensityField F = jacobian_field(grid, params);
    const PlhCoefficients a = apply_A(project_tau(*grid, F.log_values(), J));
    PlhCoefficients b = (kVolume / F.volume()) * coefficients(F, J);
    b.set_constant(0.0);
    num += a.dot(b);
    den += 2.0 * a.dot(a);
  }
  return num / den;
}

double concentration_ratio(const DensityField& F, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("concentration_ratio: delta must be in (0, 1)");
  const QuadratureGrid& grid = F.grid();
  const auto& nodes = grid.nodes();
  const auto& w = grid.weights();
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(dynamic, 64)
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    double s = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (sphere_distance(nodes[p], nodes[n]) < delta) s += w[n] * F[n];
    }
    best = std::max(best, s);
  }
  return std::min(1.0, best / F.volume());
}

double weak_constant_probe(const std::vector<DensityField>& samples, int J) {
  if (samples.empty()) throw InvalidArgument("weak_constant_probe: no samples");
  double sup = -std::numeric_limits<double>::infinity();
  for (const DensityField& F : samples) sup = std::max(sup, -lhls_residual(F, J));
  return sup;
}

double bilinear_lhls_gap(const DensityField& Q, const DensityField& R, int J) {
  const double sq = Q.volume() / kVolume, sr = R.volume() / kVolume;
  auto relative_entropy = [](const DensityField& F, double sigma) {
    std::vector<double> f(F.size());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = F[n] * std::log(F[n] / sigma);
    return F.grid().integrate(f);
  };
  const double rhs = kGamma3 / 8.0 * (sr * relative_entropy(Q, sq) + sq * relative_entropy(R, sr));
  return rhs - quadratic_form(Q, R, J) / kVolume;
}

double potential_sup_ratio(const DensityField& F, int J) {
  const std::vector<double> phi = synthesize(potential(F, J), F.grid());
  double sup = 0.0;
  for (double x : phi) sup = std::max(sup, std::abs(x));
  const double e = entropy_term(F);
  if (e > 0.0) return sup / e;
  return sup < 1e-14 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<SweepRow> lhls_sweep(GridPtr grid, const SweepConfig& config) {
  if (config.count < 0) throw InvalidArgument("lhls_sweep: negative count");
  std::vector<SweepRow> rows(config.count);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < config.count; ++k) {
    const DensityField F =
        random_density(grid, config.seed, static_cast<std::uint64_t>(k), config.degree, config.amplitude);
    SweepRow& r = rows[k];
    r.seed = config.seed;
    r.index = static_cast<std::uint64_t>(k);
    r.volume = F.volume();
    r.entropy = entropy(F);
    r.quadratic = quadratic(F, config.J);
    const double et = 0.25 * kGamma3 * r.entropy;
    r.residual = et - r.quadratic;
    r.ratio = et > 0.0 ? r.quadratic / et : 0.0;
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "seed,index,V_F,entropy,quadratic,residual,ratio\n" << std::setprecision(17);
  for (const SweepRow& r : rows) {
    os << r.seed << ',' << r.index << ',' << r.volume << ',' << r.entropy << ',' << r.quadratic << ','
       << r.residual << ',' << r.ratio << '\n';
  }
}

nlohmann::json sweep_summary(const std::vector<SweepRow>& rows) {
  nlohmann::json j{{"count", rows.size()}};
  if (rows.empty()) return j;
  double lo = rows.front().residual, hi = lo, sum = 0.0;
  for (const SweepRow& r : rows) {
    lo = std::min(lo, r.residual);
    hi = std::max(hi, r.residual);
    sum += r.residual;
  }
  j["min_residual"] = lo;
  j["max_residual"] = hi;
  j["mean_residual"] = sum / rows.size();
  return j;
}

}  // namespace crlhls
