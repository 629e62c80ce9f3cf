#include "crlhls/sphere_geometry.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <iomanip>
#include <ostream>
#include <string>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"

namespace crlhls {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr std::uint64_t kGridMagic = 0x4352475249443031ULL;  // "CRGRID01"

// Gauss-Legendre rule on [0, 1], nodes ascending.
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (double z : zeros) {
    x.push_back(z);
    if (z != 0.0) x.push_back(-z);
  }
  std::sort(x.begin(), x.end());
  nodes.clear();
  weights.clear();
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime<double>(n, xi);
    const double w = 2.0 / ((1.0 - xi * xi) * dp * dp);
    nodes.push_back(0.5 * (1.0 + xi));
    weights.push_back(0.5 * w);
  }
}

}  // namespace

SpherePoint SpherePoint::make(cplx z1, cplx z2) {
  const double n2 = std::norm(z1) + std::norm(z2);
  if (!(std::abs(n2 - 1.0) <= kUnitTolerance)) {
    throw InvalidArgument("SpherePoint: |z|^2 = " + std::to_string(n2) + " is not 1");
  }
  return SpherePoint{z1, z2};
}

SpherePoint SpherePoint::from_hopf(double eta, double xi1, double xi2) {
  return SpherePoint{std::polar(std::cos(eta), xi1), std::polar(std::sin(eta), xi2)};
}

cplx hermitian(const SpherePoint& p, const SpherePoint& q) {
  return p.z1 * std::conj(q.z1) + p.z2 * std::conj(q.z2);
}

double sphere_distance(const SpherePoint& p, const SpherePoint& q) {
  for (const SpherePoint* x : {&p, &q}) {
    const double n2 = std::norm(x->z1) + std::norm(x->z2);
    if (!(std::abs(n2 - 1.0) <= kUnitTolerance)) {
      throw InvalidArgument("sphere_distance: point off the unit sphere");
    }
  }
  // On S^3, Re(1 - p.conj(q)) = |p - q|^2 / 2 and Im(p.conj(q)) =
  // Im((p - q).conj(p + q)) / 2; no cancellation as q -> p, and swapping p, q
  // only flips the sign of im.
  const SpherePoint diff{p.z1 - q.z1, p.z2 - q.z2};
  const SpherePoint sum{p.z1 + q.z1, p.z2 + q.z2};
  const double re = 0.5 * (std::norm(diff.z1) + std::norm(diff.z2));
  const double im = 0.5 * hermitian(diff, sum).imag();
  return std::sqrt(2.0 * std::hypot(re, im));
}

QuadratureGrid QuadratureGrid::build(int n_eta, int n_angle) {
  if (n_eta < 1 || n_angle < 1) {
    throw InvalidArgument("QuadratureGrid: sizes must be positive");
  }
  QuadratureGrid g;
  g.n_eta_ = n_eta;
  g.n_angle_ = n_angle;
  g.exactness_ = std::min(4 * n_eta - 1, n_angle - 1);
  gauss_legendre_unit(n_eta, g.ring_s_, g.radial_weight_);

  const double dxi = 2.0 * kPi / n_angle;
  g.ring_weight_.resize(n_eta);
  const std::size_t total = static_cast<std::size_t>(n_eta) * n_angle * n_angle;
  g.nodes_.reserve(total);
  g.weights_.reserve(total);
  for (int i = 0; i < n_eta; ++i) {
    g.ring_weight_[i] = 0.5 * g.radial_weight_[i] * dxi * dxi;
    const double r1 = std::sqrt(g.ring_s_[i]);
    const double r2 = std::sqrt(1.0 - g.ring_s_[i]);
    for (int k1 = 0; k1 < n_angle; ++k1) {
      const cplx z1 = std::polar(r1, k1 * dxi);
      for (int k2 = 0; k2 < n_angle; ++k2) {
        g.nodes_.push_back(SpherePoint{z1, std::polar(r2, k2 * dxi)});
        g.weights_.push_back(g.ring_weight_[i]);
      }
    }
  }
  return g;
}

QuadratureGrid QuadratureGrid::for_degree(int degree) {
  if (degree < 0) throw InvalidArgument("QuadratureGrid::for_degree: negative degree");
  int n_angle = degree + 1;
  if (n_angle % 2 != 0) ++n_angle;
  const int n_eta = std::max(1, (degree + 1 + 3) / 4);
  return build(n_eta, n_angle);
}

double QuadratureGrid::ring_eta(int ring) const { return std::acos(std::sqrt(ring_s_[ring])); }

double QuadratureGrid::xi(int k) const { return 2.0 * kPi * k / n_angle_; }

double QuadratureGrid::integrate(std::span<const double> f) const {
  if (f.size() != size()) throw InvalidArgument("integrate: field size does not match grid");
  const std::size_t per_ring = static_cast<std::size_t>(n_angle_) * n_angle_;
  double total = 0.0;
  for (int i = 0; i < n_eta_; ++i) {
    double ring = 0.0;
    const double* row = f.data() + i * per_ring;
    for (std::size_t k = 0; k < per_ring; ++k) ring += row[k];
    total += ring_weight_[i] * ring;
  }
  return total;
}

void QuadratureGrid::write_csv(std::ostream& os) const {
  os << "# exactness_degree=" << exactness_ << " n_eta=" << n_eta_ << " n_angle=" << n_angle_
     << "\n";
  os << "eta,xi1,xi2,weight\n";
  os << std::setprecision(17);
  for (int i = 0; i < n_eta_; ++i) {
    const double eta = ring_eta(i);
    for (int k1 = 0; k1 < n_angle_; ++k1) {
      for (int k2 = 0; k2 < n_angle_; ++k2) {
        os << eta << ',' << xi(k1) << ',' << xi(k2) << ',' << ring_weight_[i] << '\n';
      }
    }
  }
}

void QuadratureGrid::write_binary(std::ostream& os) const {
  const std::uint64_t magic = kGridMagic;
  const std::int32_t header[3] = {exactness_, n_eta_, n_angle_};
  os.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  os.write(reinterpret_cast<const char*>(header), sizeof header);
  for (int i = 0; i < n_eta_; ++i) {
    const double eta = ring_eta(i);
    for (int k1 = 0; k1 < n_angle_; ++k1) {
      for (int k2 = 0; k2 < n_angle_; ++k2) {
        const double row[4] = {eta, xi(k1), xi(k2), ring_weight_[i]};
        os.write(reinterpret_cast<const char*>(row), sizeof row);
      }
    }
  }
}

QuadratureGrid QuadratureGrid::read_binary(std::istream& is) {
  std::uint64_t magic = 0;
  std::int32_t header[3] = {0, 0, 0};
  is.read(reinterpret_cast<char*>(&magic), sizeof magic);
  is.read(reinterpret_cast<char*>(header), sizeof header);
  if (!is || magic != kGridMagic) throw InvalidArgument("read_binary: not a grid dump");
  QuadratureGrid g = build(header[1], header[2]);
  if (g.exactness_ != header[0]) throw InvalidArgument("read_binary: exactness mismatch");
  for (std::size_t n = 0; n < g.size(); ++n) {
    double row[4];
    is.read(reinterpret_cast<char*>(row), sizeof row);
    if (!is) throw InvalidArgument("read_binary: truncated grid dump");
    if (std::abs(row[3] - g.weights_[n]) > 1e-15) {
      throw InvalidArgument("read_binary: weights do not match the rebuilt grid");
    }
  }
  return g;
}

GridPtr make_grid(int n_eta, int n_angle) {
  return std::make_shared<const QuadratureGrid>(QuadratureGrid::build(n_eta, n_angle));
}

double monomial_integral(int a, int b, int c, int d) {
  if (a != c || b != d) return 0.0;
  return kVolume *
         std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
}

double AutSphereParams::w_norm() const { return std::sqrt(std::norm(w1) + std::norm(w2)); }

void AutSphereParams::validate() const {
  if (!(scale > 0.0)) throw InvalidArgument("AutSphereParams: scale must be positive");
  if (!(w_norm() < 1.0)) throw InvalidArgument("AutSphereParams: |w| must be < 1");
}

AutSphereParams AutSphereParams::normalized(cplx w1, cplx w2) {
  AutSphereParams p;
  p.w1 = w1;
  p.w2 = w2;
  const double r2 = std::norm(w1) + std::norm(w2);
  p.scale = (1.0 - r2) * (1.0 - r2);
  p.validate();
  return p;
}

double jacobian_sphere_automorphism(const AutSphereParams& params, const SpherePoint& p) {
  const double m = std::norm(1.0 - (params.w1 * p.z1 + params.w2 * p.z2));
  return params.scale / (m * m);
}

}  // namespace crlhls
