#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crlhls/plh_basis.hpp"
#include "crlhls/sphere_geometry.hpp"

namespace crlhls {

/// Positive conformal factor F sampled on a quadrature grid.
class DensityField {
 public:
  /// Throws InvalidArgument if any value is <= 0 or the size is wrong.
  DensityField(GridPtr grid, std::vector<double> values);

  const QuadratureGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t n) const { return values_[n]; }
  std::size_t size() const { return values_.size(); }

  /// Quadrature volume V_F = sum w F.
  double volume() const { return volume_; }
  std::vector<double> log_values() const;

  /// A^{-1} tau F, if attached by spectral_ops::attach_potential.
  const std::optional<PlhCoefficients>& cached_potential() const { return potential_; }
  void set_cached_potential(PlhCoefficients p) { potential_ = std::move(p); }

 private:
  GridPtr grid_;
  std::vector<double> values_;
  double volume_ = 0.0;
  std::optional<PlhCoefficients> potential_;
};

DensityField constant_field(GridPtr grid, double c);
/// Samples of |J_k| = scale / |1 - w.z|^4.
DensityField jacobian_field(GridPtr grid, const AutSphereParams& params);
/// Samples of exp(u).
DensityField exp_field(GridPtr grid, const PlhCoefficients& u);

/// c F with quadrature volume equal to target.
DensityField normalize_to_volume(const DensityField& F, double target);

/// Raises values below floor to floor and normalizes; `clamped` reports
/// whether anything was raised.
DensityField clamp_and_normalize(GridPtr grid, std::vector<double> values, double target,
                                 bool* clamped = nullptr, double floor = 1e-12);

}  // namespace crlhls
