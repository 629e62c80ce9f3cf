#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <vector>

#include "crlhls/density_field.hpp"
#include "crlhls/plh_basis.hpp"

namespace crlhls {

/// Multiplies degree-j coefficients by nu(j) = 8 j (j + 1).
PlhCoefficients apply_A(const PlhCoefficients& u);
/// Divides degree-j >= 1 coefficients by nu(j); constant part set to 0.
PlhCoefficients apply_A_inverse(const PlhCoefficients& u);
/// A^{-s}: nu(j)^{-s} on degree j >= 1, 0 on constants.
PlhCoefficients apply_A_fracpower(double s, const PlhCoefficients& u);

/// nu in the real basis ordering of PlhCoefficients::to_real (0 first).
Eigen::VectorXd eigenvalue_diagonal(int J);

/// A^{-1} tau F at degree J; uses the cached value when its degree matches.
PlhCoefficients potential(const DensityField& F, int J);
/// Copy of F carrying A^{-1} tau F.
DensityField attach_potential(const DensityField& F, int J);

/// Gram matrix of the real basis in L^2(F dv). Throws UnderResolvedError when
/// the result is not positive definite.
Eigen::MatrixXd conformal_gram(const DensityField& F, int J);

namespace kernels {
Eigen::MatrixXd conformal_gram(const QuadratureGrid& grid, std::span<const double> f, int J);
}
namespace reference {
Eigen::MatrixXd conformal_gram(const QuadratureGrid& grid, std::span<const double> f, int J);
}

/// Truncated model of (S^3, theta_F).
struct ConformalFrame {
  DensityField F;
  int J;
  double volume;
  PlhCoefficients potential;
  Eigen::MatrixXd gram;

  static ConformalFrame build(const DensityField& F, int J);
};

/// Smallest `count` nonzero eigenvalues of D c = mu M_F c, ascending.
std::vector<double> conformal_eigenvalues(const ConformalFrame& frame, int count);
std::vector<double> conformal_eigenvalues(const DensityField& F, int J, int count);

/// Spectrum of the round sphere at truncation J, ascending, constants excluded.
std::vector<double> sphere_eigenvalues(int J);

/// A_{theta_F}^{-1} tau_F f from the closed four-term formula.
PlhCoefficients conformal_inverse_apply(const DensityField& F, std::span<const double> f, int J);
/// Same object from a Galerkin solve with the F-mean-zero constraint
/// imposed by a Lagrange multiplier.
PlhCoefficients conformal_inverse_galerkin(const ConformalFrame& frame, std::span<const double> f);

/// sum_{k<=K} 1/lambda_k(theta_F) - sum_{k<=K} 1/lambda_k(theta_0), same J.
double truncated_trace_difference(const ConformalFrame& frame, int K);

void write_spectrum_csv(std::ostream& os, const std::vector<double>& eigenvalues);
/// int64 rows, int64 cols, then row-major doubles.
void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(std::istream& is);

}  // namespace crlhls
