#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <span>
#include <vector>

#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

enum class PlhKind { constant, holomorphic, antiholomorphic };

struct PlhBasisIndex {
  PlhKind kind = PlhKind::constant;
  int a = 0;
  int b = 0;

  int degree() const { return a + b; }
  /// Throws InvalidArgument if kind and (a, b) are inconsistent.
  void validate() const;
};

/// Number of holomorphic monomials z1^a z2^b with 1 <= a + b <= J.
constexpr int holomorphic_count(int J) { return J * (J + 3) / 2; }
/// Position of (a, b) in the degree-ordered holomorphic list.
constexpr int holomorphic_offset(int a, int b) {
  const int j = a + b;
  return (j - 1) * (j + 2) / 2 + a;
}
/// Dimension of the real truncated space: constant plus Re/Im pairs.
constexpr int real_dimension(int J) { return 1 + 2 * holomorphic_count(J); }

/// L^2 norm of z1^a z2^b on S^3.
double monomial_norm(int a, int b);

/// Truncated real pluriharmonic function
///   u = c0 / sqrt(V) + 2 Re sum_{1 <= a+b <= J} h_ab z1^a z2^b / n_ab.
/// Antiholomorphic coefficients are conj(h_ab) and are not stored.
class PlhCoefficients {
 public:
  PlhCoefficients() = default;
  explicit PlhCoefficients(int max_degree);

  int max_degree() const { return max_degree_; }

  double constant() const { return c0_; }
  void set_constant(double c) { c0_ = c; }
  std::vector<cplx>& holomorphic() { return h_; }
  const std::vector<cplx>& holomorphic() const { return h_; }
  cplx& holo(int a, int b) { return h_[holomorphic_offset(a, b)]; }
  cplx holo(int a, int b) const { return h_[holomorphic_offset(a, b)]; }

  /// Coefficient of any index, conj(h) for antiholomorphic ones.
  cplx coeff(const PlhBasisIndex& idx) const;
  /// Sets the index and its conjugate partner so that reality is kept.
  void set_coeff(const PlhBasisIndex& idx, cplx value);

  /// L^2(dv) inner product of the two real functions.
  double dot(const PlhCoefficients& other) const;
  double norm() const { return std::sqrt(dot(*this)); }
  /// Mean value over S^3.
  double mean() const;

  /// Coordinates in the real orthonormal basis
  /// (1/sqrt(V), sqrt2 Re phi_ab, sqrt2 Im phi_ab, ...).
  Eigen::VectorXd to_real() const;
  static PlhCoefficients from_real(int max_degree, const Eigen::VectorXd& x);

  /// Copy truncated or zero-padded to another degree.
  PlhCoefficients resized(int max_degree) const;

  PlhCoefficients& operator+=(const PlhCoefficients& o);
  PlhCoefficients& operator-=(const PlhCoefficients& o);
  PlhCoefficients& operator*=(double s);

  /// Records (kind, a, b, re, im) for every index, conjugates included.
  nlohmann::json to_json() const;
  static PlhCoefficients from_json(const nlohmann::json& j);

 private:
  int max_degree_ = 0;
  double c0_ = 0.0;
  std::vector<cplx> h_;
};

PlhCoefficients operator+(PlhCoefficients a, const PlhCoefficients& b);
PlhCoefficients operator-(PlhCoefficients a, const PlhCoefficients& b);
PlhCoefficients operator*(double s, PlhCoefficients a);

cplx basis_eval(const PlhBasisIndex& idx, const SpherePoint& p);

/// Pointwise value of the real function at p.
double evaluate(const PlhCoefficients& u, const SpherePoint& p);

/// Orthogonal projection onto pluriharmonic functions of degree <= J.
/// Requires exactness_degree >= 2J.
PlhCoefficients project_tau(const QuadratureGrid& grid, std::span<const double> samples, int J);

/// Values of u at the grid nodes.
std::vector<double> synthesize(const PlhCoefficients& u, const QuadratureGrid& grid);

/// Reproducing kernel of the degree-j pluriharmonic subspace.
double zonal_kernel(int j, const SpherePoint& p, const SpherePoint& q);

/// Complex coefficients of ln|1 - w.z|^{-4} (bilinear w.z), truncated at J.
PlhCoefficients log_jacobian_coefficients(cplx w1, cplx w2, double scale, int J);

}  // namespace crlhls
