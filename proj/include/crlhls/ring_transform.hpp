#pragma once

#include <span>
#include <vector>

#include "crlhls/plh_basis.hpp"
#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

/// Weighted angular Fourier data of a real field, one block per ring:
///   spec(i, k1, k2) = w_i sum_{nodes of ring i} f e^{-i(k1 xi1 + k2 xi2)}
/// for k1, k2 in [kmin, kmax]. Integrals of f times z^a conj(z)^c reduce
/// to sums over rings of radial factors times these entries.
class RingSpectrum {
 public:
  RingSpectrum(int n_eta, int kmin, int kmax);

  int n_eta() const { return n_eta_; }
  int kmin() const { return kmin_; }
  int kmax() const { return kmax_; }
  int width() const { return kmax_ - kmin_ + 1; }

  cplx& at(int ring, int k1, int k2) { return data_[offset(ring, k1, k2)]; }
  cplx at(int ring, int k1, int k2) const { return data_[offset(ring, k1, k2)]; }

 private:
  std::size_t offset(int ring, int k1, int k2) const {
    const std::size_t w = width();
    return (static_cast<std::size_t>(ring) * w + (k1 - kmin_)) * w + (k2 - kmin_);
  }

  int n_eta_;
  int kmin_;
  int kmax_;
  std::vector<cplx> data_;
};

/// Per-ring radial factors s^{a/2} (1-s)^{b/2} / n_ab for 0 <= a, b <= J.
class RadialTable {
 public:
  RadialTable(const QuadratureGrid& grid, int J);
  double operator()(int ring, int a, int b) const {
    return data_[(static_cast<std::size_t>(ring) * (J_ + 1) + a) * (J_ + 1) + b];
  }
  int max_degree() const { return J_; }

 private:
  int J_;
  std::vector<double> data_;
};

// OpenMP-parallel kernels: separable per-ring DFTs, threads split over rings.
namespace kernels {

RingSpectrum ring_spectrum(const QuadratureGrid& grid, std::span<const double> f, int kmin,
                           int kmax);
PlhCoefficients project(const QuadratureGrid& grid, std::span<const double> f, int J);
std::vector<double> synthesize(const QuadratureGrid& grid, const PlhCoefficients& u);

}  // namespace kernels

// Serial node-by-node sums; slow, kept to cross-check the kernels above.
namespace reference {

RingSpectrum ring_spectrum(const QuadratureGrid& grid, std::span<const double> f, int kmin,
                           int kmax);
PlhCoefficients project(const QuadratureGrid& grid, std::span<const double> f, int J);
std::vector<double> synthesize(const QuadratureGrid& grid, const PlhCoefficients& u);

}  // namespace reference

}  // namespace crlhls
