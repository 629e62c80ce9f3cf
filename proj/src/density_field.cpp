#include "crlhls/density_field.hpp"

#include <cmath>

#include "crlhls/errors.hpp"

namespace crlhls {

DensityField::DensityField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("DensityField: null grid");
  if (values_.size() != grid_->size()) throw InvalidArgument("DensityField: size mismatch");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("DensityField: values must be finite and positive");
    }
  }
  volume_ = grid_->integrate(values_);
}

std::vector<double> DensityField::log_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t n = 0; n < values_.size(); ++n) out[n] = std::log(values_[n]);
  return out;
}

DensityField constant_field(GridPtr grid, double c) {
  std::vector<double> v(grid->size(), c);
  return DensityField(std::move(grid), std::move(v));
}

DensityField jacobian_field(GridPtr grid, const AutSphereParams& params) {
  params.validate();
  std::vector<double> v(grid->size());
  const auto& nodes = grid->nodes();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = jacobian_sphere_automorphism(params, nodes[n]);
  return DensityField(std::move(grid), std::move(v));
}

DensityField exp_field(GridPtr grid, const PlhCoefficients& u) {
  std::vector<double> v = synthesize(u, *grid);
  for (double& x : v) x = std::exp(x);
  return DensityField(std::move(grid), std::move(v));
}

DensityField normalize_to_volume(const DensityField& F, double target) {
  if (!(target > 0.0)) throw InvalidArgument("normalize_to_volume: target must be positive");
  const double c = target / F.volume();
  std::vector<double> v(F.values().begin(), F.values().end());
  for (double& x : v) x *= c;
  return DensityField(F.grid_ptr(), std::move(v));
}

DensityField clamp_and_normalize(GridPtr grid, std::vector<double> values, double target,
                                 bool* clamped, double floor) {
  bool any = false;
  for (double& x : values) {
    if (!(x >= floor)) {
      x = floor;
      any = true;
    }
  }
  if (clamped) *clamped = any;
  return normalize_to_volume(DensityField(std::move(grid), std::move(values)), target);
}

}  // namespace crlhls
