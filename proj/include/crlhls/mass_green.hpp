#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlhls/density_field.hpp"
#include "crlhls/plh_basis.hpp"
#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

using SphereKernel = std::function<double(const SpherePoint&, const SpherePoint&)>;
using SphereFunction = std::function<double(const SpherePoint&)>;

/// G(p, q) = -ln|1 - p.conj(q)| / (8 pi^2) = gamma_3 ln(1/d) + m_0.
/// Throws InvalidArgument when p and q coincide.
double green_sphere(const SpherePoint& p, const SpherePoint& q);

/// sum_{1 <= j <= J} zonal_kernel(j, p, q) / nu(j).
double green_spectral(const SpherePoint& p, const SpherePoint& q, int J);

/// ln 2 / (8 pi^2).
double robin_mass_sphere();

/// Limit at h = 0 of the quadratic through (h, f(h)), (h/2, ...), (h/4, ...).
double richardson3(const std::function<double(double)>& f, double h);

/// Point at distance d from p along the geodesic where p.conj(q) stays real.
SpherePoint point_at_distance(const SpherePoint& p, double d);

/// Richardson limit of G(p, q) + gamma_3 ln d(p, q) as q -> p.
double robin_mass_extrapolated(const SphereKernel& green, const SpherePoint& p, double d0 = 0.4);

enum class MassMethod { closed_form, transported, extrapolated };
const char* to_string(MassMethod m);

/// Pointwise mass on the grid and its integral against the frame's volume form.
struct MassReport {
  MassMethod method = MassMethod::closed_form;
  std::vector<double> mass;
  double total_mass = 0.0;

  double min() const;
  double max() const;
  nlohmann::json to_json(const std::string& field_csv_path) const;
  void write_field_csv(std::ostream& os, const QuadratureGrid& grid) const;
};

/// Constant sphere mass on every node; total ln 2 / 4.
MassReport sphere_mass_report(const QuadratureGrid& grid);

/// Mass of theta_F from the constant base mass:
///   m_F = m_0 + (gamma_3/4) ln F - (2/V_F) A^{-1} tau F + (1/V_F^2) int F A^{-1} tau F,
/// total = int m_F F dv.
MassReport mass_transform(const DensityField& F, int J);

/// Second conformal step theta_F -> theta_{F G}: base mass m_F on the grid,
/// relative factor G sampled on the same grid, A_{theta_F}^{-1} from the
/// closed conformal-inverse formula.
MassReport mass_transform_from(const DensityField& F, std::span<const double> base_mass,
                               std::span<const double> G, int J);

/// Green's function of theta_F.
class ConformalGreen {
 public:
  ConformalGreen(const DensityField& F, int J);

  double operator()(const SpherePoint& p, const SpherePoint& q) const;
  /// A^{-1} tau F at an arbitrary point.
  double potential_at(const SpherePoint& p) const { return evaluate(phi_, p); }
  double volume() const { return vf_; }
  /// int F A^{-1} tau F dv.
  double potential_moment() const { return moment_; }

 private:
  PlhCoefficients phi_;
  double vf_;
  double moment_;
};

double green_conformal(const DensityField& F, int J, const SpherePoint& p, const SpherePoint& q);

/// m_F(x) recovered from ConformalGreen by Richardson extrapolation in d;
/// F(x) enters through d_{theta_F} ~ F(x)^{1/4} d.
double singular_limit_mass(const ConformalGreen& green, const SpherePoint& x, double F_at_x,
                           double d0 = 0.2);

/// Mean of ln|1 - y.conj(p)| over {y : |1 - y.conj(p)| < delta} chosen so the
/// region has the given volume.
double log_kernel_cell_average(double cell_volume);

/// int G(p, y) g(y) dv(y) with p = node `node`: grid sum over the other
/// nodes, the singular node replaced by the cell average of G times g(p).
double green_grid_integral(const QuadratureGrid& grid, std::size_t node, std::span<const double> g);

/// int G(p, y) g(y) dv(y) with polar coordinates about the singularity
/// (tanh-sinh radially, trapezoid along the Hopf fibre direction).
double green_adapted_integral(const SpherePoint& p, const SphereFunction& g, int n_fibre = 64);

/// tau_F Q'_F on the grid and the geometric mass N_F.
struct GeometricMass {
  std::vector<double> q_prime;
  MassReport mass;
};

/// Standard sphere: Q' = 8 and N = m_0.
GeometricMass q_prime_and_geometric_mass(const QuadratureGrid& grid);
/// Conformal frame theta_F; throws InvalidArgument unless ln F is
/// pluriharmonic to L^2 residual `plh_tolerance`.
GeometricMass q_prime_and_geometric_mass(const DensityField& F, int J, double plh_tolerance = 1e-6);

/// ||(I - tau) ln F||_2 at degree J.
double log_pluriharmonic_residual(const DensityField& F, int J);

}  // namespace crlhls
