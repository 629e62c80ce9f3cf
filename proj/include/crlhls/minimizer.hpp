#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crlhls/constants.hpp"
#include "crlhls/density_field.hpp"
#include "crlhls/plh_basis.hpp"

namespace crlhls {

struct MinimizerConfig {
  std::vector<double> eps_schedule{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-8};
  double damping = 0.5;
  int max_iters = 2000;
  double el_tolerance = 1e-9;
  double volume = kVolume;
  int degree = 16;

  /// Throws InvalidArgument on a non-decreasing schedule or out-of-range values.
  void validate() const;
};

struct HistoryRow {
  double eps;
  int iter;
  double j_eps;
  double residual;
  double damping;
};

struct MinimizerState {
  DensityField F;
  double eps = 0.0;
  double lagrange = 0.0;
  double el_residual = 0.0;
  double j_eps = 0.0;
  std::vector<HistoryRow> history;
  bool stagnated = false;
  std::vector<std::string> warnings;
  /// (1 - eps) lambda_1^eps A^{-1-eps} tau F on the grid, for the current F and eps.
  std::vector<double> nonlocal;
};

struct ElResidual {
  double lagrange;
  double residual;
};

/// J_eps(F); eps = 0 gives J(F).
double j_eps_value(const DensityField& F, double eps, int J);

/// Multiplier lambda = (1/V) int E F dv and the L^2 norm of E - lambda, where
/// E = m_0 + (gamma_3/4)(ln F + 1) - (2 (1-eps) lambda_1^eps / V) A^{-1-eps} tau F.
/// Requires 0 <= eps < 1 and V_F = V.
ElResidual el_residual(const DensityField& F, double eps, int J);

/// One damped update of ln F towards the Euler-Lagrange solution with the
/// nonlocal term frozen, backtracking until J_eps does not increase.
/// Throws StagnationError after 30 halvings.
MinimizerState fixed_point_step(const MinimizerState& state, double damping, int J);

/// Initial state: clamps values below 1e-12, renormalizes to `volume`.
MinimizerState initial_state(const DensityField& F0, double eps, int J, double volume = kVolume);

/// Continuation over config.eps_schedule; on stagnation returns the best
/// iterate with `stagnated` set.
MinimizerState minimize(const MinimizerConfig& config, const DensityField& F0);

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history);
void write_field_csv(std::ostream& os, const DensityField& F);
/// Pluriharmonic log-coefficients of F as JSON.
PlhCoefficients log_coefficients(const DensityField& F, int J);

}  // namespace crlhls
