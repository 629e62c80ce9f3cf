#include "crlhls/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/ring_transform.hpp"

namespace crlhls {

namespace {

template <class Scale>
PlhCoefficients scale_by_degree(const PlhCoefficients& u, Scale scale) {
  PlhCoefficients out(u.max_degree());
  out.set_constant(0.0);
  for (int j = 1; j <= u.max_degree(); ++j) {
    const double s = scale(eigenvalue(j));
    for (int a = 0; a <= j; ++a) out.holo(a, j - a) = s * u.holo(a, j - a);
  }
  return out;
}

std::vector<double> product(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
  return out;
}

}  // namespace

PlhCoefficients apply_A(const PlhCoefficients& u) {
  return scale_by_degree(u, [](double nu) { return nu; });
}

PlhCoefficients apply_A_inverse(const PlhCoefficients& u) {
  return scale_by_degree(u, [](double nu) { return 1.0 / nu; });
}

PlhCoefficients apply_A_fracpower(double s, const PlhCoefficients& u) {
  if (!(s > 0.0)) throw InvalidArgument("apply_A_fracpower: s must be positive");
  return scale_by_degree(u, [s](double nu) { return std::pow(nu, -s); });
}

Eigen::VectorXd eigenvalue_diagonal(int J) {
  Eigen::VectorXd d(real_dimension(J));
  d[0] = 0.0;
  int k = 1;
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a <= j; ++a) {
      d[k++] = eigenvalue(j);
      d[k++] = eigenvalue(j);
    }
  }
  return d;
}

PlhCoefficients potential(const DensityField& F, int J) {
  if (const auto& p = F.cached_potential(); p && p->max_degree() == J) return *p;
  return apply_A_inverse(project_tau(F.grid(), F.values(), J));
}

DensityField attach_potential(const DensityField& F, int J) {
  DensityField out = F;
  out.set_cached_potential(potential(F, J));
  return out;
}

namespace kernels {

Eigen::MatrixXd conformal_gram(const QuadratureGrid& grid, std::span<const double> f, int J) {
  const int nh = holomorphic_count(J);
  const int dim = real_dimension(J);
  const RingSpectrum spec = ring_spectrum(grid, f, -J, 2 * J);
  const RadialTable rad(grid, J);
  const int n_eta = grid.n_eta();

  std::vector<int> ia(nh), ib(nh);
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a <= j; ++a) {
      ia[holomorphic_offset(a, j - a)] = a;
      ib[holomorphic_offset(a, j - a)] = j - a;
    }
  }

  Eigen::MatrixXd m(dim, dim);
  const double sv = std::sqrt(2.0 / kVolume);

  double mass = 0.0;
  for (int i = 0; i < n_eta; ++i) mass += spec.at(i, 0, 0).real();
  m(0, 0) = mass / kVolume;

#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < nh; ++p) {
    const int a = ia[p], b = ib[p];
    cplx lin = 0.0;
    for (int i = 0; i < n_eta; ++i) lin += rad(i, a, b) * spec.at(i, a, b);
    m(0, 1 + 2 * p) = m(1 + 2 * p, 0) = sv * lin.real();
    m(0, 2 + 2 * p) = m(2 + 2 * p, 0) = -sv * lin.imag();

    for (int q = p; q < nh; ++q) {
      const int a2 = ia[q], b2 = ib[q];
      cplx P = 0.0, S = 0.0;
      for (int i = 0; i < n_eta; ++i) {
        const double r = rad(i, a, b) * rad(i, a2, b2);
        P += r * spec.at(i, a2 - a, b2 - b);
        S += r * std::conj(spec.at(i, a + a2, b + b2));
      }
      const int rp = 1 + 2 * p, ip = 2 + 2 * p, rq = 1 + 2 * q, iq = 2 + 2 * q;
      m(rp, rq) = m(rq, rp) = S.real() + P.real();
      m(ip, iq) = m(iq, ip) = P.real() - S.real();
      m(rp, iq) = m(iq, rp) = S.imag() - P.imag();
      m(ip, rq) = m(rq, ip) = S.imag() + P.imag();
    }
  }
  return m;
}

}  // namespace kernels

namespace reference {

Eigen::MatrixXd conformal_gram(const QuadratureGrid& grid, std::span<const double> f, int J) {
  const int dim = real_dimension(J);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd e(dim);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const SpherePoint& p = grid.nodes()[n];
    e[0] = 1.0 / std::sqrt(kVolume);
    for (int j = 1; j <= J; ++j) {
      for (int a = 0; a <= j; ++a) {
        const int k = holomorphic_offset(a, j - a);
        const cplx phi = basis_eval({PlhKind::holomorphic, a, j - a}, p);
        e[1 + 2 * k] = std::sqrt(2.0) * phi.real();
        e[2 + 2 * k] = std::sqrt(2.0) * phi.imag();
      }
    }
    m.noalias() += (grid.weights()[n] * f[n]) * e * e.transpose();
  }
  return m;
}

}  // namespace reference

Eigen::MatrixXd conformal_gram(const DensityField& F, int J) {
  if (J < 0) throw InvalidArgument("conformal_gram: negative degree");
  if (F.grid().exactness_degree() < 2 * J) {
    throw UnderResolvedError("conformal_gram: grid exactness below 2J");
  }
  Eigen::MatrixXd m = kernels::conformal_gram(F.grid(), F.values(), J);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw UnderResolvedError("conformal_gram: Gram matrix is not positive definite");
  }
  return m;
}

ConformalFrame ConformalFrame::build(const DensityField& F, int J) {
  PlhCoefficients pot = crlhls::potential(F, J);
  Eigen::MatrixXd gram = conformal_gram(F, J);
  return ConformalFrame{F, J, F.volume(), std::move(pot), std::move(gram)};
}

std::vector<double> conformal_eigenvalues(const ConformalFrame& frame, int count) {
  const int dim = real_dimension(frame.J);
  if (count < 0 || count > dim - 1) {
    throw InvalidArgument("conformal_eigenvalues: count exceeds the truncated spectrum");
  }
  const Eigen::MatrixXd D = eigenvalue_diagonal(frame.J).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(D, frame.gram,
                                                               Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw UnderResolvedError("conformal_eigenvalues: eigensolver failed");
  }
  const Eigen::VectorXd& mu = es.eigenvalues();
  // mu(0) is the kernel (constants); everything else is bounded below by
  // nu(1) / max F, far from zero.
  std::vector<double> out(mu.data() + 1, mu.data() + 1 + count);
  return out;
}

std::vector<double> conformal_eigenvalues(const DensityField& F, int J, int count) {
  return conformal_eigenvalues(ConformalFrame::build(F, J), count);
}

std::vector<double> sphere_eigenvalues(int J) {
  const Eigen::VectorXd d = eigenvalue_diagonal(J);
  return std::vector<double>(d.data() + 1, d.data() + d.size());
}

PlhCoefficients conformal_inverse_apply(const DensityField& F, std::span<const double> f, int J) {
  const QuadratureGrid& grid = F.grid();
  if (f.size() != grid.size()) throw InvalidArgument("conformal_inverse_apply: size mismatch");
  const std::vector<double> Ff = product(F.values(), f);
  const double vf = F.volume();
  const double int_Ff = grid.integrate(Ff);

  PlhCoefficients u = apply_A_inverse(project_tau(grid, Ff, J));
  const PlhCoefficients phi = potential(F, J);

  const double a1 = grid.integrate(product(F.values(), synthesize(u, grid))) / vf;
  const double a2 = int_Ff * grid.integrate(product(F.values(), synthesize(phi, grid))) / (vf * vf);

  u -= (int_Ff / vf) * phi;
  u.set_constant(u.constant() + (a2 - a1) * std::sqrt(kVolume));
  return u;
}

PlhCoefficients conformal_inverse_galerkin(const ConformalFrame& frame, std::span<const double> f) {
  const QuadratureGrid& grid = frame.F.grid();
  const int J = frame.J;
  const int dim = real_dimension(J);
  const std::vector<double> Ff = product(frame.F.values(), f);
  const double mean_f = grid.integrate(Ff) / frame.volume;

  std::vector<double> rhs_field(Ff.size());
  for (std::size_t n = 0; n < Ff.size(); ++n) rhs_field[n] = Ff[n] - mean_f * frame.F[n];
  const Eigen::VectorXd b = project_tau(grid, rhs_field, J).to_real();
  // <e_i, 1>_F is the first column of the Gram matrix scaled by sqrt(V).
  const Eigen::VectorXd c = frame.gram.col(0) * std::sqrt(kVolume);

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
  K.topLeftCorner(dim, dim) = eigenvalue_diagonal(J).asDiagonal();
  K.block(0, dim, dim, 1) = c;
  K.block(dim, 0, 1, dim) = c.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
  rhs.head(dim) = b;

  const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
  return PlhCoefficients::from_real(J, sol.head(dim));
}

double truncated_trace_difference(const ConformalFrame& frame, int K) {
  const std::vector<double> lf = conformal_eigenvalues(frame, K);
  const std::vector<double> l0 = sphere_eigenvalues(frame.J);
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += 1.0 / lf[k] - 1.0 / l0[k];
  return s;
}

void write_spectrum_csv(std::ostream& os, const std::vector<double>& eigenvalues) {
  os << "k,lambda_k\n" << std::setprecision(17);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) os << k + 1 << ',' << eigenvalues[k] << '\n';
}

void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& m) {
  const std::int64_t dims[2] = {m.rows(), m.cols()};
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

Eigen::MatrixXd read_matrix_binary(std::istream& is) {
  std::int64_t dims[2] = {0, 0};
  is.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!is || dims[0] < 0 || dims[1] < 0) throw InvalidArgument("read_matrix_binary: bad header");
  Eigen::MatrixXd m(dims[0], dims[1]);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double v;
      is.read(reinterpret_cast<char*>(&v), sizeof v);
      m(r, c) = v;
    }
  }
  if (!is) throw InvalidArgument("read_matrix_binary: truncated data");
  return m;
}

}  // namespace crlhls
