#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace crlhls {

using cplx = std::complex<double>;

/// z^n by repeated squaring; ipow(0, 0) = 1.
inline cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (; n > 0; n >>= 1, z *= z) {
    if (n & 1) r *= z;
  }
  return r;
}

/// Point of S^3 in C^2. Construct through make() to get the unit-norm check.
struct SpherePoint {
  cplx z1;
  cplx z2;

  /// Throws InvalidArgument when | |z|^2 - 1 | exceeds 1e-9.
  static SpherePoint make(cplx z1, cplx z2);
  /// z1 = cos(eta) e^{i xi1}, z2 = sin(eta) e^{i xi2}.
  static SpherePoint from_hopf(double eta, double xi1, double xi2);
};

/// Hermitian product z . conj(w) = z1 conj(w1) + z2 conj(w2).
cplx hermitian(const SpherePoint& p, const SpherePoint& q);

/// d(p, q) = sqrt(2 |1 - p . conj(q)|).
double sphere_distance(const SpherePoint& p, const SpherePoint& q);

/// Hopf-coordinate product rule on S^3.
///
/// Nodes are laid out ring by ring: Gauss-Legendre in s = cos^2(eta) on
/// [0, 1] and a uniform rule with n_angle points in each of xi1, xi2. The
/// measure is the round one, dv = (1/2) ds dxi1 dxi2, with total mass 2 pi^2.
/// Monomials z^a conj(z)^c with |a| + |c| <= exactness_degree() integrate
/// exactly.
class QuadratureGrid {
 public:
  static QuadratureGrid build(int n_eta, int n_angle);
  /// Smallest grid (even n_angle) whose exactness degree is >= degree.
  static QuadratureGrid for_degree(int degree);

  int n_eta() const { return n_eta_; }
  int n_angle() const { return n_angle_; }
  int exactness_degree() const { return exactness_; }
  std::size_t size() const { return nodes_.size(); }

  const std::vector<SpherePoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// s = cos^2(eta) of ring i.
  double ring_s(int ring) const { return ring_s_[ring]; }
  double ring_eta(int ring) const;
  /// Weight shared by every node of ring i.
  double ring_weight(int ring) const { return ring_weight_[ring]; }
  /// Weight of the 1-D rule in s (sums to 1).
  double radial_weight(int ring) const { return radial_weight_[ring]; }
  double xi(int k) const;

  std::size_t index(int ring, int k1, int k2) const {
    return (static_cast<std::size_t>(ring) * n_angle_ + k1) * n_angle_ + k2;
  }

  double integrate(std::span<const double> f) const;

  /// "# exactness_degree=..." header followed by eta,xi1,xi2,weight rows.
  void write_csv(std::ostream& os) const;
  void write_binary(std::ostream& os) const;
  /// Rebuilds the grid from the sizes recorded in a binary dump and checks
  /// that the stored nodes match.
  static QuadratureGrid read_binary(std::istream& is);

 private:
  QuadratureGrid() = default;

  int n_eta_ = 0;
  int n_angle_ = 0;
  int exactness_ = 0;
  std::vector<double> ring_s_;
  std::vector<double> radial_weight_;
  std::vector<double> ring_weight_;
  std::vector<SpherePoint> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

GridPtr make_grid(int n_eta, int n_angle);

/// Exact integral over S^3 of z1^a z2^b conj(z1)^c conj(z2)^d.
double monomial_integral(int a, int b, int c, int d);

/// Parameters of the Jacobian |J_k| = scale / |1 - w.z|^4 of a sphere
/// automorphism; w.z is the bilinear product w1 z1 + w2 z2.
struct AutSphereParams {
  double scale = 1.0;
  cplx w1{0.0, 0.0};
  cplx w2{0.0, 0.0};

  double w_norm() const;
  /// Throws InvalidArgument unless scale > 0 and |w| < 1.
  void validate() const;
  /// Scale giving volume 2 pi^2, i.e. (1 - |w|^2)^2.
  static AutSphereParams normalized(cplx w1, cplx w2);
};

double jacobian_sphere_automorphism(const AutSphereParams& params, const SpherePoint& p);

}  // namespace crlhls
