#include "crlhls/heisenberg.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"

namespace crlhls {

namespace {

constexpr double kOmegaTolerance = 1e-6;

// Midpoint cells of [-L, L] in s, mapped by x = L sinh(sigma s) / sinh(sigma).
void axis_rule(double L, int n, double sigma, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double ds = 2.0 / n;
  for (int k = 0; k < n; ++k) {
    const double s = -1.0 + (k + 0.5) * ds;
    if (sigma > 0.0) {
      x[k] = L * std::sinh(sigma * s) / std::sinh(sigma);
      w[k] = L * sigma * std::cosh(sigma * s) / std::sinh(sigma) * ds;
    } else {
      x[k] = L * s;
      w[k] = L * ds;
    }
  }
}

// |z - z'|^4 + (t - t' - 2 Im(z conj z'))^2
inline double gauge4(const HeisPoint& a, const HeisPoint& b) {
  const cplx dz = a.z - b.z;
  const double dt = a.t - b.t - 2.0 * (a.z * std::conj(b.z)).imag();
  const double r2 = std::norm(dz);
  return r2 * r2 + dt * dt;
}

double entropy(const HeisGrid& g) {
  double s = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double f = g.values()[n];
    if (f > 0.0) s += g.weights()[n] * f * std::log(f);
  }
  return s;
}

}  // namespace

HeisPoint group_mul(const HeisPoint& a, const HeisPoint& b) {
  return {a.z + b.z, a.t + b.t + 2.0 * (a.z * std::conj(b.z)).imag()};
}

HeisPoint group_inverse(const HeisPoint& a) { return {-a.z, -a.t}; }

double koranyi_gauge(const HeisPoint& w) {
  const double r2 = std::norm(w.z);
  return std::pow(r2 * r2 + w.t * w.t, 0.25);
}

double koranyi_distance(const HeisPoint& a, const HeisPoint& b) { return std::pow(gauge4(a, b), 0.25); }

HeisPoint dilate(double lambda, const HeisPoint& w) {
  if (!(lambda > 0.0)) throw InvalidArgument("dilate: lambda must be positive");
  return {lambda * w.z, lambda * lambda * w.t};
}

SpherePoint cayley(const HeisPoint& w) {
  const double r2 = std::norm(w.z);
  const cplx den(1.0 + r2, w.t);
  return SpherePoint{2.0 * w.z / den, cplx(1.0 - r2, -w.t) / den};
}

double cayley_jacobian(const HeisPoint& w) {
  const double a = 1.0 + std::norm(w.z);
  const double q = a * a + w.t * w.t;
  return 8.0 / (q * q);
}

void AutHeisParams::validate() const {
  if (!(scale > 0.0)) throw InvalidArgument("AutHeisParams: scale must be positive");
  if (!(lambda.real() > std::norm(w))) throw InvalidArgument("AutHeisParams: need Re(lambda) > |w|^2");
}

AutHeisParams AutHeisParams::normalized(cplx lambda, cplx w) {
  // The shear z -> z - conj(w), t -> t - 2 Im(z w) - Im(lambda) reduces it to
  // C / ||z|^2 + it + mu|^4 with mu = Re(lambda) - |w|^2, whose integral is C pi^2 / (4 mu^2).
  const double mu = lambda.real() - std::norm(w);
  AutHeisParams p{8.0 * mu * mu, lambda, w};
  p.validate();
  return p;
}

double heis_jacobian(const AutHeisParams& params, const HeisPoint& p) {
  const double m = std::norm(cplx(std::norm(p.z), p.t) + 2.0 * p.z * params.w + params.lambda);
  return params.scale / (m * m);
}

HeisGrid HeisGrid::tensor(const HeisBox& box, int nx, int ny, int nt, double stretch,
                          double stretch_t) {
  if (stretch_t < 0.0) stretch_t = stretch;
  if (nx < 1 || ny < 1 || nt < 1) throw InvalidArgument("HeisGrid: node counts must be positive");
  if (!(box.x > 0.0 && box.y > 0.0 && box.t > 0.0)) throw InvalidArgument("HeisGrid: empty box");
  if (!(stretch >= 0.0)) throw InvalidArgument("HeisGrid: stretch must be nonnegative");
  HeisGrid g;
  g.box_ = box;
  g.nx_ = nx;
  g.ny_ = ny;
  g.nt_ = nt;
  g.stretch_ = stretch;
  g.stretch_t_ = stretch_t;
  g.tensor_ = true;
  std::vector<double> xs, wx, ys, wy, ts, wt;
  axis_rule(box.x, nx, stretch, xs, wx);
  axis_rule(box.y, ny, stretch, ys, wy);
  axis_rule(box.t, nt, stretch_t, ts, wt);
  const std::size_t n = static_cast<std::size_t>(nx) * ny * nt;
  g.nodes_.reserve(n);
  g.weights_.reserve(n);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nt; ++k) {
        g.nodes_.push_back({cplx(xs[i], ys[j]), ts[k]});
        g.weights_.push_back(wx[i] * wy[j] * wt[k]);
      }
    }
  }
  g.values_.assign(n, 0.0);
  return g;
}

HeisGrid HeisGrid::with_values(std::vector<double> values) const {
  if (values.size() != size()) throw InvalidArgument("HeisGrid: value count does not match nodes");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("HeisGrid: values must be finite and >= 0");
  }
  HeisGrid out = *this;
  out.values_ = std::move(values);
  return out;
}

HeisGrid HeisGrid::sampled(const std::function<double(const HeisPoint&)>& f) const {
  std::vector<double> v(size());
  for (std::size_t n = 0; n < size(); ++n) v[n] = f(nodes_[n]);
  return with_values(std::move(v));
}

double HeisGrid::integral() const {
  double s = 0.0;
  for (std::size_t n = 0; n < size(); ++n) s += weights_[n] * values_[n];
  return s;
}

HeisGrid HeisGrid::normalized(double target) const {
  const double v = integral();
  if (!(v > 0.0)) throw InvalidArgument("HeisGrid::normalized: empty support");
  HeisGrid out = *this;
  for (double& x : out.values_) x *= target / v;
  return out;
}

HeisGrid HeisGrid::translated(const HeisPoint& g) const {
  HeisGrid out = *this;
  out.tensor_ = false;
  for (HeisPoint& p : out.nodes_) p = group_mul(p, g);
  return out;
}

HeisGrid HeisGrid::dilated(double lambda) const {
  HeisGrid out = *this;
  out.tensor_ = false;
  const double l4 = std::pow(lambda, 4);
  for (HeisPoint& p : out.nodes_) p = dilate(lambda, p);
  for (double& w : out.weights_) w *= l4;
  for (double& f : out.values_) f /= l4;
  return out;
}

void HeisGrid::write(std::ostream& os) const {
  if (!tensor_) throw InvalidArgument("HeisGrid::write: only tensor grids have a header form");
  os << std::setprecision(17) << "heisgrid " << nx_ << ' ' << ny_ << ' ' << nt_ << ' ' << box_.x << ' '
     << box_.y << ' ' << box_.t << ' ' << stretch_ << ' ' << stretch_t_ << '\n';
  for (double v : values_) os << v << '\n';
}

HeisGrid HeisGrid::read(std::istream& is) {
  std::string tag;
  int nx = 0, ny = 0, nt = 0;
  HeisBox box;
  double stretch = 0.0, stretch_t = 0.0;
  is >> tag >> nx >> ny >> nt >> box.x >> box.y >> box.t >> stretch >> stretch_t;
  if (!is || tag != "heisgrid") throw InvalidArgument("HeisGrid::read: bad header");
  HeisGrid g = tensor(box, nx, ny, nt, stretch, stretch_t);
  std::vector<double> v(g.size());
  for (double& x : v) {
    if (!(is >> x)) throw InvalidArgument("HeisGrid::read: truncated values");
  }
  return g.with_values(std::move(v));
}

double koranyi_cell_log_average(double cell_volume) {
  if (!(cell_volume > 0.0)) throw InvalidArgument("koranyi_cell_log_average: volume must be positive");
  // Ball volume is (pi^2 / 2) R^4 and the gauge has density 4 s^3 / R^4 on [0, R].
  const double R = std::pow(2.0 * cell_volume / (kPi * kPi), 0.25);
  return -std::log(R) + 0.25;
}

namespace kernels {

double log_energy(const HeisGrid& grid) {
  const auto& nodes = grid.nodes();
  std::vector<std::size_t> support;
  std::vector<double> a;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (grid.values()[n] > 0.0) {
      support.push_back(n);
      a.push_back(grid.weights()[n] * grid.values()[n]);
    }
  }
  const std::size_t m_count = support.size();
  double off = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : off)
  for (std::size_t i = 0; i < m_count; ++i) {
    const HeisPoint& p = nodes[support[i]];
    double row = 0.0;
    for (std::size_t j = i + 1; j < m_count; ++j) row += a[j] * std::log(gauge4(p, nodes[support[j]]));
    off += a[i] * row;
  }
  double diag = 0.0;
  for (std::size_t i = 0; i < m_count; ++i) {
    diag += a[i] * a[i] * koranyi_cell_log_average(grid.weights()[support[i]]);
  }
  // ln(1/d) = -ln(d^4) / 4, each unordered pair counted twice
  return diag - 0.5 * off;
}

}  // namespace kernels

namespace reference {

double log_energy(const HeisGrid& grid) {
  double s = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double am = grid.weights()[m] * grid.values()[m];
    if (am == 0.0) continue;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const double an = grid.weights()[n] * grid.values()[n];
      if (an == 0.0) continue;
      const double k = m == n ? koranyi_cell_log_average(grid.weights()[m])
                              : std::log(1.0 / koranyi_distance(grid.nodes()[m], grid.nodes()[n]));
      s += am * an * k;
    }
  }
  return s;
}

}  // namespace reference

double j_heisenberg(const HeisGrid& f) {
  const double V = f.integral();
  if (!(V > 0.0)) throw InvalidArgument("j_heisenberg: empty support");
  return 0.25 * kGamma3 * (entropy(f) - 4.0 / V * kernels::log_energy(f));
}

double sharp_lhls_deficit(const HeisGrid& g) {
  const double V = g.integral();
  if (!(std::abs(V - kOmega3) <= kOmegaTolerance)) {
    throw InvalidArgument("sharp_lhls_deficit: int g must equal 2 pi^2; renormalize first");
  }
  // ln(2 / d^2) = ln 2 + 2 ln(1/d)
  const double lhs = 2.0 / (kOmega3 * kOmega3) * (std::log(2.0) * V * V + 2.0 * kernels::log_energy(g));
  return entropy(g) / kOmega3 + std::log(2.0) - lhs;
}

std::vector<RefinementLevel> default_refinement_levels() {
  return {
      {{8.0, 8.0, 64.0}, 16, 16, 16, 2.8, 5.5},
      {{10.0, 10.0, 100.0}, 22, 22, 22, 3.0, 6.5},
      {{12.0, 12.0, 144.0}, 28, 28, 28, 3.2, 7.0},
  };
}

std::vector<RefinementLevel> refinement_study(const AutHeisParams& params,
                                              std::vector<RefinementLevel> levels) {
  params.validate();
  for (RefinementLevel& L : levels) {
    const HeisGrid g = HeisGrid::tensor(L.box, L.nx, L.ny, L.nt, L.stretch, L.stretch_t)
                           .sampled([&](const HeisPoint& p) { return heis_jacobian(params, p); });
    L.nodes = g.size();
    L.truncated_mass = kOmega3 - g.integral();
    L.deficit = sharp_lhls_deficit(g.normalized(kOmega3));
  }
  return levels;
}

nlohmann::json to_json(const RefinementLevel& level) {
  return {{"box", {level.box.x, level.box.y, level.box.t}},
          {"nodes_per_axis", {level.nx, level.ny, level.nt}},
          {"stretch", {level.stretch, level.stretch_t}},
          {"nodes", level.nodes},
          {"truncated_mass", level.truncated_mass},
          {"deficit", level.deficit}};
}

}  // namespace crlhls
