#include "crlhls/mass_green.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/spectral_ops.hpp"

namespace crlhls {

namespace {

constexpr double kInvEightPiSq = 1.0 / (8.0 * kPi * kPi);
constexpr double kQuadTolerance = 1e-11;

std::vector<double> product(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
  return out;
}

// Region {|1 - z1| < delta} inside the unit disc in polar coordinates about
// z1 = 1: r < min(delta, 2 cos alpha). Returns (area, int ln r dA).
std::pair<double, double> log_disc_moments(double delta) {
  auto r_max = [delta](double alpha) { return std::min(delta, 2.0 * std::cos(alpha)); };
  auto area = [&](double alpha) {
    const double R = r_max(alpha);
    return 0.5 * R * R;
  };
  auto log_moment = [&](double alpha) {
    const double R = r_max(alpha);
    return R > 0.0 ? 0.5 * R * R * (std::log(R) - 0.5) : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double cut = delta < 2.0 ? std::acos(0.5 * delta) : 0.0;
  double a = 2.0 * cut * 0.5 * delta * delta;
  double m = 2.0 * cut * 0.5 * delta * delta * (std::log(delta) - 0.5);
  if (cut < 0.5 * kPi) {
    a += 2.0 * ts.integrate(area, cut, 0.5 * kPi, kQuadTolerance);
    m += 2.0 * ts.integrate(log_moment, cut, 0.5 * kPi, kQuadTolerance);
  }
  return {a, m};
}

}  // namespace

double green_sphere(const SpherePoint& p, const SpherePoint& q) {
  const double d = sphere_distance(p, q);
  if (!(d > 0.0)) throw InvalidArgument("green_sphere: p and q coincide");
  // |1 - p.conj(q)| = d^2 / 2
  return -kInvEightPiSq * std::log(0.5 * d * d);
}

double green_spectral(const SpherePoint& p, const SpherePoint& q, int J) {
  if (J < 1) throw InvalidArgument("green_spectral: J must be >= 1");
  const cplx u = hermitian(p, q);
  cplx uj = 1.0;
  double s = 0.0;
  for (int j = 1; j <= J; ++j) {
    uj *= u;
    s += 2.0 * (j + 1) / kVolume * uj.real() / eigenvalue(j);
  }
  return s;
}

double robin_mass_sphere() { return kSphereMass; }

double richardson3(const std::function<double(double)>& f, double h) {
  const double f0 = f(h), f1 = f(0.5 * h), f2 = f(0.25 * h);
  // Lagrange interpolation at 0 through nodes h, h/2, h/4.
  return (f0 - 6.0 * f1 + 8.0 * f2) / 3.0;
}

SpherePoint point_at_distance(const SpherePoint& p, double d) {
  if (!(d > 0.0 && d <= 2.0)) throw InvalidArgument("point_at_distance: d must be in (0, 2]");
  const double t = 2.0 * std::asin(0.5 * d);
  const double c = std::cos(t), s = std::sin(t);
  // (-conj p2, conj p1) is Hermitian-orthogonal to p.
  return SpherePoint{c * p.z1 - s * std::conj(p.z2), c * p.z2 + s * std::conj(p.z1)};
}

double robin_mass_extrapolated(const SphereKernel& green, const SpherePoint& p, double d0) {
  return richardson3(
      [&](double d) { return green(p, point_at_distance(p, d)) + kGamma3 * std::log(d); }, d0);
}

const char* to_string(MassMethod m) {
  switch (m) {
    case MassMethod::closed_form: return "closed_form";
    case MassMethod::transported: return "transported";
    case MassMethod::extrapolated: return "extrapolated";
  }
  return "unknown";
}

double MassReport::min() const { return *std::min_element(mass.begin(), mass.end()); }
double MassReport::max() const { return *std::max_element(mass.begin(), mass.end()); }

nlohmann::json MassReport::to_json(const std::string& field_csv_path) const {
  return {{"method", to_string(method)},
          {"total_mass", total_mass},
          {"min", min()},
          {"max", max()},
          {"field_csv_path", field_csv_path}};
}

void MassReport::write_field_csv(std::ostream& os, const QuadratureGrid& grid) const {
  if (mass.size() != grid.size()) throw InvalidArgument("write_field_csv: size mismatch");
  os << "eta,xi1,xi2,mass\n" << std::setprecision(17);
  std::size_t n = 0;
  for (int i = 0; i < grid.n_eta(); ++i) {
    for (int k1 = 0; k1 < grid.n_angle(); ++k1) {
      for (int k2 = 0; k2 < grid.n_angle(); ++k2) {
        os << grid.ring_eta(i) << ',' << grid.xi(k1) << ',' << grid.xi(k2) << ',' << mass[n++]
           << '\n';
      }
    }
  }
}

MassReport sphere_mass_report(const QuadratureGrid& grid) {
  MassReport r;
  r.method = MassMethod::closed_form;
  r.mass.assign(grid.size(), kSphereMass);
  r.total_mass = grid.integrate(r.mass);
  return r;
}

MassReport mass_transform(const DensityField& F, int J) {
  const QuadratureGrid& grid = F.grid();
  const std::vector<double> phi = synthesize(potential(F, J), grid);
  const double vf = F.volume();
  const double moment = grid.integrate(product(F.values(), phi));
  const double shift = moment / (vf * vf);

  MassReport r;
  r.method = MassMethod::transported;
  r.mass.resize(grid.size());
#pragma omp parallel for
  for (std::size_t n = 0; n < grid.size(); ++n) {
    r.mass[n] = kSphereMass + 0.25 * kGamma3 * std::log(F[n]) - 2.0 / vf * phi[n] + shift;
  }
  r.total_mass = grid.integrate(product(r.mass, F.values()));
  return r;
}

MassReport mass_transform_from(const DensityField& F, std::span<const double> base_mass,
                               std::span<const double> G, int J) {
  const QuadratureGrid& grid = F.grid();
  if (base_mass.size() != grid.size() || G.size() != grid.size()) {
    throw InvalidArgument("mass_transform_from: size mismatch");
  }
  for (double g : G) {
    if (!(g > 0.0)) throw InvalidArgument("mass_transform_from: G must be positive");
  }
  const std::vector<double> FG = product(F.values(), G);
  const double vnew = grid.integrate(FG);
  const std::vector<double> psi = synthesize(conformal_inverse_apply(F, G, J), grid);
  const double shift = grid.integrate(product(FG, psi)) / (vnew * vnew);

  MassReport r;
  r.method = MassMethod::transported;
  r.mass.resize(grid.size());
#pragma omp parallel for
  for (std::size_t n = 0; n < grid.size(); ++n) {
    r.mass[n] = base_mass[n] + 0.25 * kGamma3 * std::log(G[n]) - 2.0 / vnew * psi[n] + shift;
  }
  r.total_mass = grid.integrate(product(r.mass, FG));
  return r;
}

ConformalGreen::ConformalGreen(const DensityField& F, int J)
    : phi_(potential(F, J)), vf_(F.volume()) {
  moment_ = F.grid().integrate(product(F.values(), synthesize(phi_, F.grid())));
}

double ConformalGreen::operator()(const SpherePoint& p, const SpherePoint& q) const {
  return green_sphere(p, q) - (potential_at(p) + potential_at(q)) / vf_ + moment_ / (vf_ * vf_);
}

double green_conformal(const DensityField& F, int J, const SpherePoint& p, const SpherePoint& q) {
  return ConformalGreen(F, J)(p, q);
}

double singular_limit_mass(const ConformalGreen& green, const SpherePoint& x, double F_at_x,
                           double d0) {
  if (!(F_at_x > 0.0)) throw InvalidArgument("singular_limit_mass: F(x) must be positive");
  return robin_mass_extrapolated(green, x, d0) + 0.25 * kGamma3 * std::log(F_at_x);
}

double log_kernel_cell_average(double cell_volume) {
  if (!(cell_volume > 0.0 && cell_volume <= kVolume)) {
    throw InvalidArgument("log_kernel_cell_average: volume out of range");
  }
  // The fibre direction contributes a factor 2 pi to both moments.
  auto excess = [cell_volume](double delta) {
    return 2.0 * kPi * log_disc_moments(delta).first - cell_volume;
  };
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      excess, 1e-300, 2.0, -cell_volume, kVolume - cell_volume,
      boost::math::tools::eps_tolerance<double>(50), iters);
  const double delta = 0.5 * (bracket.first + bracket.second);
  const auto [area, moment] = log_disc_moments(delta);
  return moment / area;
}

double green_grid_integral(const QuadratureGrid& grid, std::size_t node, std::span<const double> g) {
  if (node >= grid.size() || g.size() != grid.size()) {
    throw InvalidArgument("green_grid_integral: bad node or size");
  }
  const SpherePoint& p = grid.nodes()[node];
  double s = 0.0;
#pragma omp parallel for reduction(+ : s)
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (n == node) continue;
    s += grid.weights()[n] * green_sphere(p, grid.nodes()[n]) * g[n];
  }
  const double w = grid.weights()[node];
  return s - w * kInvEightPiSq * log_kernel_cell_average(w) * g[node];
}

double green_adapted_integral(const SpherePoint& p, const SphereFunction& g, int n_fibre) {
  if (n_fibre < 1) throw InvalidArgument("green_adapted_integral: n_fibre must be positive");
  // y = R^* z with R = [[conj p1, conj p2], [-p2, p1]], so y.conj(p) = z1.
  const double dxi = 2.0 * kPi / n_fibre;
  std::vector<cplx> fibre(n_fibre);
  for (int k = 0; k < n_fibre; ++k) fibre[k] = std::polar(1.0, k * dxi);

  auto fibre_mean = [&](cplx z1) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(z1)));
    double s = 0.0;
    for (const cplx& e : fibre) {
      const cplx z2 = rho * e;
      s += g(SpherePoint{p.z1 * z1 - std::conj(p.z2) * z2, p.z2 * z1 + std::conj(p.z1) * z2});
    }
    return s * dxi;
  };

  boost::math::quadrature::tanh_sinh<double> ts;
  auto inner = [&](double alpha) {
    const double R = 2.0 * std::cos(alpha);
    if (!(R > 0.0)) return 0.0;
    const cplx dir = std::polar(1.0, alpha);
    auto f = [&](double r) { return r > 0.0 ? r * std::log(r) * fibre_mean(1.0 - r * dir) : 0.0; };
    return ts.integrate(f, 0.0, R, kQuadTolerance);
  };
  return -kInvEightPiSq * ts.integrate(inner, -0.5 * kPi, 0.5 * kPi, kQuadTolerance);
}

double log_pluriharmonic_residual(const DensityField& F, int J) {
  const QuadratureGrid& grid = F.grid();
  const std::vector<double> lf = F.log_values();
  const std::vector<double> fit = synthesize(project_tau(grid, lf, J), grid);
  std::vector<double> r2(lf.size());
  for (std::size_t n = 0; n < lf.size(); ++n) r2[n] = (lf[n] - fit[n]) * (lf[n] - fit[n]);
  return std::sqrt(grid.integrate(r2));
}

GeometricMass q_prime_and_geometric_mass(const QuadratureGrid& grid) {
  return GeometricMass{std::vector<double>(grid.size(), kSphereQPrime), sphere_mass_report(grid)};
}

GeometricMass q_prime_and_geometric_mass(const DensityField& F, int J, double plh_tolerance) {
  const QuadratureGrid& grid = F.grid();
  const double resid = log_pluriharmonic_residual(F, J);
  if (!(resid <= plh_tolerance)) {
    throw InvalidArgument("q_prime_and_geometric_mass: ln F is not pluriharmonic (residual " +
                          std::to_string(resid) + ")");
  }
  const Eigen::VectorXd x = project_tau(grid, F.log_values(), J).to_real();

  // Galerkin coefficients of tau_F Q'_F: M_F c = <F^{-1} Q', e>_F + (1/2) D x,
  // with <F^{-1} 8, e_i>_F = 8 sqrt(V) delta_i0.
  const Eigen::MatrixXd gram = conformal_gram(F, J);
  Eigen::VectorXd rhs = 0.5 * eigenvalue_diagonal(J).cwiseProduct(x);
  rhs[0] += kSphereQPrime * std::sqrt(kVolume);
  const Eigen::VectorXd c = gram.llt().solve(rhs);

  GeometricMass out;
  out.q_prime = synthesize(PlhCoefficients::from_real(J, c), grid);
  const std::vector<double> h = synthesize(conformal_inverse_apply(F, out.q_prime, J), grid);

  out.mass = mass_transform(F, J);
  for (std::size_t n = 0; n < grid.size(); ++n) out.mass.mass[n] -= 0.5 * kGamma3 * h[n];
  out.mass.total_mass = grid.integrate(product(out.mass.mass, F.values()));
  return out;
}

}  // namespace crlhls
