#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

struct HeisPoint {
  cplx z;
  double t = 0.0;
};

/// (z, t).(z', t') = (z + z', t + t' + 2 Im(z conj z')).
HeisPoint group_mul(const HeisPoint& a, const HeisPoint& b);
HeisPoint group_inverse(const HeisPoint& a);

/// (|z|^4 + t^2)^{1/4}.
double koranyi_gauge(const HeisPoint& w);
/// Gauge of a.b^{-1}; invariant under right translation a, b -> a.g, b.g.
double koranyi_distance(const HeisPoint& a, const HeisPoint& b);

/// (lambda z, lambda^2 t); lambda > 0.
HeisPoint dilate(double lambda, const HeisPoint& w);

/// (2z / (1 + |z|^2 + it), (1 - |z|^2 - it) / (1 + |z|^2 + it)).
SpherePoint cayley(const HeisPoint& w);
/// 8 / ((1 + |z|^2)^2 + t^2)^2.
double cayley_jacobian(const HeisPoint& w);

/// Extremal densities C / | |z|^2 + it + 2 z w + lambda |^4 with Re(lambda) > |w|^2.
struct AutHeisParams {
  double scale = 8.0;
  cplx lambda{1.0, 0.0};
  cplx w{0.0, 0.0};

  void validate() const;
  /// scale chosen so the density integrates to 2 pi^2.
  static AutHeisParams normalized(cplx lambda, cplx w);
};

double heis_jacobian(const AutHeisParams& params, const HeisPoint& p);

/// Half-extents of a box centred at the origin.
struct HeisBox {
  double x = 1.0;
  double y = 1.0;
  double t = 1.0;
};

/// Nodes, cell volumes and density values. Tensor grids use midpoint cells in
/// a sinh-stretched coordinate per axis (stretch 0 is uniform). A negative
/// stretch_t reuses stretch for the t axis.
class HeisGrid {
 public:
  static HeisGrid tensor(const HeisBox& box, int nx, int ny, int nt, double stretch = 0.0,
                         double stretch_t = -1.0);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<HeisPoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& values() const { return values_; }
  const HeisBox& box() const { return box_; }
  bool is_tensor() const { return tensor_; }

  /// Copy with values f(node); throws InvalidArgument on negative or non-finite values.
  HeisGrid sampled(const std::function<double(const HeisPoint&)>& f) const;
  HeisGrid with_values(std::vector<double> values) const;
  /// sum w f.
  double integral() const;
  HeisGrid normalized(double target) const;

  /// Nodes moved to x.g (the translation preserving koranyi_distance); weights unchanged.
  HeisGrid translated(const HeisPoint& g) const;
  /// f -> lambda^{-4} f(delta_{1/lambda} .): nodes dilated, weights times lambda^4.
  HeisGrid dilated(double lambda) const;

  /// Header line then one value per line (tensor grids only).
  void write(std::ostream& os) const;
  static HeisGrid read(std::istream& is);

 private:
  HeisBox box_;
  int nx_ = 0, ny_ = 0, nt_ = 0;
  double stretch_ = 0.0;
  double stretch_t_ = 0.0;
  bool tensor_ = false;
  std::vector<HeisPoint> nodes_;
  std::vector<double> weights_;
  std::vector<double> values_;
};

/// Mean of ln(1/gauge) over a Koranyi ball of the given volume.
double koranyi_cell_log_average(double cell_volume);

namespace kernels {
/// sum_{m,n} w_m w_n f_m f_n ln(1/d(x_m, x_n)); diagonal from koranyi_cell_log_average.
double log_energy(const HeisGrid& grid);
}  // namespace kernels

namespace reference {
double log_energy(const HeisGrid& grid);
}  // namespace reference

/// (gamma_3/4)(int f ln f - (4/V_f) int int f(x) ln(1/|x y^{-1}|) f(y)), Koranyi gauge.
double j_heisenberg(const HeisGrid& f);

/// (1/omega) int g ln g + ln 2 - (2/omega^2) int int ln(2/|x y^{-1}|) g g with
/// |.| the squared gauge |z|^4 + t^2 under the square root; requires int g = omega within 1e-6.
double sharp_lhls_deficit(const HeisGrid& g);

struct RefinementLevel {
  HeisBox box;
  int nx, ny, nt;
  double stretch;
  double stretch_t;
  std::size_t nodes = 0;
  double truncated_mass = 0.0;  // 2 pi^2 - quadrature mass before renormalization
  double deficit = 0.0;
};

/// Default three-level study: box growth with finer spacing.
std::vector<RefinementLevel> default_refinement_levels();

/// Deficit of the normalized extremal at each level.
std::vector<RefinementLevel> refinement_study(const AutHeisParams& params,
                                              std::vector<RefinementLevel> levels);

nlohmann::json to_json(const RefinementLevel& level);

}  // namespace crlhls
