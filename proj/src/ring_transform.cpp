#include "crlhls/ring_transform.hpp"

#include <cmath>

#include "crlhls/constants.hpp"

namespace crlhls {

namespace {

double log_monomial_norm(int a, int b) {
  return 0.5 * (std::log(kVolume) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                std::lgamma(a + b + 2.0));
}

// roots[m] = e^{2 pi i m / n}; exponents are reduced mod n before lookup.
std::vector<cplx> unit_roots(int n) {
  std::vector<cplx> roots(n);
  for (int m = 0; m < n; ++m) roots[m] = std::polar(1.0, 2.0 * kPi * m / n);
  return roots;
}

int mod(long long k, int n) {
  const long long r = k % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

RingSpectrum::RingSpectrum(int n_eta, int kmin, int kmax)
    : n_eta_(n_eta), kmin_(kmin), kmax_(kmax),
      data_(static_cast<std::size_t>(n_eta) * (kmax - kmin + 1) * (kmax - kmin + 1)) {}

RadialTable::RadialTable(const QuadratureGrid& grid, int J)
    : J_(J), data_(static_cast<std::size_t>(grid.n_eta()) * (J + 1) * (J + 1)) {
  for (int i = 0; i < grid.n_eta(); ++i) {
    const double ls = 0.5 * std::log(grid.ring_s(i));
    const double lc = 0.5 * std::log1p(-grid.ring_s(i));
    for (int a = 0; a <= J; ++a) {
      for (int b = 0; b <= J; ++b) {
        data_[(static_cast<std::size_t>(i) * (J + 1) + a) * (J + 1) + b] =
            std::exp(a * ls + b * lc - log_monomial_norm(a, b));
      }
    }
  }
}

namespace kernels {

RingSpectrum ring_spectrum(const QuadratureGrid& grid, std::span<const double> f, int kmin,
                           int kmax) {
  const int n = grid.n_angle();
  const int nk = kmax - kmin + 1;
  const std::vector<cplx> roots = unit_roots(n);
  // tw[k][m] = e^{-i k xi_m}
  std::vector<cplx> tw(static_cast<std::size_t>(nk) * n);
  for (int k = 0; k < nk; ++k) {
    for (int m = 0; m < n; ++m) {
      tw[static_cast<std::size_t>(k) * n + m] =
          std::conj(roots[mod(static_cast<long long>(k + kmin) * m, n)]);
    }
  }

  RingSpectrum out(grid.n_eta(), kmin, kmax);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < grid.n_eta(); ++i) {
    const double* block = f.data() + grid.index(i, 0, 0);
    std::vector<cplx> g(static_cast<std::size_t>(n) * nk);
    for (int m1 = 0; m1 < n; ++m1) {
      const double* row = block + static_cast<std::size_t>(m1) * n;
      for (int k2 = 0; k2 < nk; ++k2) {
        const cplx* t = tw.data() + static_cast<std::size_t>(k2) * n;
        cplx acc = 0.0;
        for (int m2 = 0; m2 < n; ++m2) acc += row[m2] * t[m2];
        g[static_cast<std::size_t>(m1) * nk + k2] = acc;
      }
    }
    const double w = grid.ring_weight(i);
    for (int k1 = 0; k1 < nk; ++k1) {
      const cplx* t = tw.data() + static_cast<std::size_t>(k1) * n;
      for (int k2 = 0; k2 < nk; ++k2) {
        cplx acc = 0.0;
        for (int m1 = 0; m1 < n; ++m1) acc += t[m1] * g[static_cast<std::size_t>(m1) * nk + k2];
        out.at(i, k1 + kmin, k2 + kmin) = w * acc;
      }
    }
  }
  return out;
}

PlhCoefficients project(const QuadratureGrid& grid, std::span<const double> f, int J) {
  const RingSpectrum spec = ring_spectrum(grid, f, 0, J);
  const RadialTable rad(grid, J);
  PlhCoefficients u(J);
  double c0 = 0.0;
  for (int i = 0; i < grid.n_eta(); ++i) c0 += spec.at(i, 0, 0).real();
  u.set_constant(c0 / std::sqrt(kVolume));
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a <= j; ++a) {
      const int b = j - a;
      cplx acc = 0.0;
      for (int i = 0; i < grid.n_eta(); ++i) acc += rad(i, a, b) * spec.at(i, a, b);
      u.holo(a, b) = acc;
    }
  }
  return u;
}

std::vector<double> synthesize(const QuadratureGrid& grid, const PlhCoefficients& u) {
  const int n = grid.n_angle();
  const int J = u.max_degree();
  const RadialTable rad(grid, J);
  const std::vector<cplx> roots = unit_roots(n);
  // tw[k][m] = e^{i k xi_m}, 0 <= k <= J
  std::vector<cplx> tw(static_cast<std::size_t>(J + 1) * n);
  for (int k = 0; k <= J; ++k) {
    for (int m = 0; m < n; ++m) {
      tw[static_cast<std::size_t>(k) * n + m] = roots[mod(static_cast<long long>(k) * m, n)];
    }
  }
  const double c = u.constant() / std::sqrt(kVolume);
  std::vector<double> out(grid.size());

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < grid.n_eta(); ++i) {
    // g[m2][a] = sum_b h_ab rad e^{i b xi_m2}
    std::vector<cplx> g(static_cast<std::size_t>(J + 1) * n, 0.0);
    for (int a = 0; a <= J; ++a) {
      for (int b = (a == 0 ? 1 : 0); a + b <= J; ++b) {
        const cplx coef = u.holo(a, b) * rad(i, a, b);
        const cplx* t = tw.data() + static_cast<std::size_t>(b) * n;
        for (int m2 = 0; m2 < n; ++m2) g[static_cast<std::size_t>(m2) * (J + 1) + a] += coef * t[m2];
      }
    }
    // e^{i a xi_m1} by row, contiguous in a
    std::vector<cplx> row(J + 1);
    double* block = out.data() + grid.index(i, 0, 0);
    for (int m1 = 0; m1 < n; ++m1) {
      for (int a = 0; a <= J; ++a) row[a] = tw[static_cast<std::size_t>(a) * n + m1];
      for (int m2 = 0; m2 < n; ++m2) {
        const cplx* gm = g.data() + static_cast<std::size_t>(m2) * (J + 1);
        double acc = 0.0;
        for (int a = 0; a <= J; ++a) {
          acc += row[a].real() * gm[a].real() - row[a].imag() * gm[a].imag();
        }
        block[static_cast<std::size_t>(m1) * n + m2] = c + 2.0 * acc;
      }
    }
  }
  return out;
}

}  // namespace kernels

namespace reference {

RingSpectrum ring_spectrum(const QuadratureGrid& grid, std::span<const double> f, int kmin,
                           int kmax) {
  RingSpectrum out(grid.n_eta(), kmin, kmax);
  for (int i = 0; i < grid.n_eta(); ++i) {
    for (int m1 = 0; m1 < grid.n_angle(); ++m1) {
      for (int m2 = 0; m2 < grid.n_angle(); ++m2) {
        const double v = grid.ring_weight(i) * f[grid.index(i, m1, m2)];
        for (int k1 = kmin; k1 <= kmax; ++k1) {
          for (int k2 = kmin; k2 <= kmax; ++k2) {
            out.at(i, k1, k2) += v * std::polar(1.0, -(k1 * grid.xi(m1) + k2 * grid.xi(m2)));
          }
        }
      }
    }
  }
  return out;
}

PlhCoefficients project(const QuadratureGrid& grid, std::span<const double> f, int J) {
  PlhCoefficients u(J);
  double c0 = 0.0;
  const auto& nodes = grid.nodes();
  const auto& weights = grid.weights();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double v = weights[n] * f[n];
    c0 += v;
    for (int j = 1; j <= J; ++j) {
      for (int a = 0; a <= j; ++a) {
        const PlhBasisIndex idx{PlhKind::holomorphic, a, j - a};
        u.holo(a, j - a) += v * std::conj(basis_eval(idx, nodes[n]));
      }
    }
  }
  u.set_constant(c0 / std::sqrt(kVolume));
  return u;
}

std::vector<double> synthesize(const QuadratureGrid& grid, const PlhCoefficients& u) {
  std::vector<double> out(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) out[n] = evaluate(u, grid.nodes()[n]);
  return out;
}

}  // namespace reference

}  // namespace crlhls
