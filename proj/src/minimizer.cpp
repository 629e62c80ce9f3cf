#include "crlhls/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "crlhls/errors.hpp"
#include "crlhls/functionals.hpp"
#include "crlhls/spectral_ops.hpp"

namespace crlhls {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kDescentSlack = 1e-12;
constexpr double kVolumeTolerance = 1e-10;

double eps_weight(double eps) { return (1.0 - eps) * std::pow(kFirstEigenvalue, eps); }

// Everything the iteration needs from one projection of F.
struct Evaluation {
  double j_eps;
  double lagrange;
  double residual;
  std::vector<double> psi;  // (1 - eps) lambda_1^eps A^{-1-eps} tau F on the grid
};

Evaluation evaluate_state(const DensityField& F, double eps, int J) {
  const QuadratureGrid& grid = F.grid();
  const double V = F.volume();
  const PlhCoefficients c = project_tau(grid, F.values(), J);
  const PlhCoefficients a = eps_weight(eps) * apply_A_fracpower(1.0 + eps, c);
  Evaluation ev;
  ev.psi = synthesize(a, grid);

  std::vector<double> E(F.size()), EF(F.size()), flogf(F.size());
  for (std::size_t n = 0; n < F.size(); ++n) {
    const double lf = std::log(F[n]);
    flogf[n] = F[n] * lf;
    E[n] = kSphereMass + 0.25 * kGamma3 * (lf + 1.0) - 2.0 / V * ev.psi[n];
    EF[n] = E[n] * F[n];
  }
  ev.j_eps = kSphereMass * V + 0.25 * kGamma3 * grid.integrate(flogf) - a.dot(c) / V;
  ev.lagrange = grid.integrate(EF) / V;
  for (double& e : E) e = (e - ev.lagrange) * (e - ev.lagrange);
  ev.residual = std::sqrt(grid.integrate(E));
  return ev;
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("minimizer: eps must be in [0, 1)");
}

}  // namespace

void MinimizerConfig::validate() const {
  if (eps_schedule.empty()) throw InvalidArgument("MinimizerConfig: empty eps schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0 && eps_schedule[k] < 1.0)) {
      throw InvalidArgument("MinimizerConfig: eps values must lie in (0, 1)");
    }
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) {
      throw InvalidArgument("MinimizerConfig: eps schedule must be strictly decreasing");
    }
  }
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("MinimizerConfig: damping in (0, 1]");
  if (max_iters < 1) throw InvalidArgument("MinimizerConfig: max_iters must be positive");
  if (!(el_tolerance > 0.0)) throw InvalidArgument("MinimizerConfig: tolerance must be positive");
  if (!(volume > 0.0)) throw InvalidArgument("MinimizerConfig: volume must be positive");
  if (degree < 1) throw InvalidArgument("MinimizerConfig: degree must be positive");
}

double j_eps_value(const DensityField& F, double eps, int J) {
  check_eps(eps);
  return eps > 0.0 ? j_epsilon(F, eps, J) : j_functional(F, J).total;
}

ElResidual el_residual(const DensityField& F, double eps, int J) {
  check_eps(eps);
  const Evaluation ev = evaluate_state(F, eps, J);
  return {ev.lagrange, ev.residual};
}

MinimizerState initial_state(const DensityField& F0, double eps, int J, double volume) {
  bool clamped = false;
  std::vector<double> v(F0.values().begin(), F0.values().end());
  MinimizerState s{clamp_and_normalize(F0.grid_ptr(), std::move(v), volume, &clamped), eps, 0.0, 0.0,
                   0.0, {}, false, {}, {}};
  if (clamped) s.warnings.push_back("start density clamped below 1e-12 and renormalized");
  check_eps(eps);
  const Evaluation ev = evaluate_state(s.F, eps, J);
  s.lagrange = ev.lagrange;
  s.el_residual = ev.residual;
  s.j_eps = ev.j_eps;
  s.nonlocal = ev.psi;
  return s;
}

MinimizerState fixed_point_step(const MinimizerState& state, double damping, int J) {
  const DensityField& F = state.F;
  const double V = F.volume();
  const double eps = state.eps;
  const std::vector<double> psi =
      state.nonlocal.size() == F.size() ? state.nonlocal : evaluate_state(F, eps, J).psi;
  // ln G solves E = lambda with the nonlocal term frozen.
  std::vector<double> log_f(F.size()), log_g(F.size());
  for (std::size_t n = 0; n < F.size(); ++n) {
    log_f[n] = std::log(F[n]);
    log_g[n] = 4.0 / kGamma3 * (state.lagrange - kSphereMass + 2.0 / V * psi[n]) - 1.0;
  }

  double d = damping;
  for (int halving = 0; halving <= kMaxHalvings; ++halving, d *= 0.5) {
    std::vector<double> next(F.size());
    double shift = 0.0;
    for (std::size_t n = 0; n < F.size(); ++n) {
      next[n] = (1.0 - d) * log_f[n] + d * log_g[n];
      shift = std::max(shift, next[n]);
    }
    for (double& x : next) x = std::exp(x - shift);
    DensityField cand = normalize_to_volume(DensityField(F.grid_ptr(), std::move(next)), V);
    const Evaluation ev = evaluate_state(cand, eps, J);
    if (ev.j_eps <= state.j_eps + kDescentSlack) {
      MinimizerState out = state;
      out.F = std::move(cand);
      out.j_eps = ev.j_eps;
      out.lagrange = ev.lagrange;
      out.el_residual = ev.residual;
      out.nonlocal = ev.psi;
      const int iter = out.history.empty() ? 1 : out.history.back().iter + 1;
      out.history.push_back({eps, iter, ev.j_eps, ev.residual, d});
      return out;
    }
  }
  throw StagnationError("fixed_point_step: no descent after 30 halvings of the damping");
}

MinimizerState minimize(const MinimizerConfig& config, const DensityField& F0) {
  config.validate();
  const int J = config.degree;
  if (F0.grid().exactness_degree() < 2 * J) {
    throw UnderResolvedError("minimize: grid exactness below 2 * degree");
  }
  MinimizerState state = initial_state(F0, config.eps_schedule.front(), J, config.volume);
  MinimizerState best = state;

  for (double eps : config.eps_schedule) {
    if (eps != state.eps) {
      state.eps = eps;
      const Evaluation ev = evaluate_state(state.F, eps, J);
      state.lagrange = ev.lagrange;
      state.el_residual = ev.residual;
      state.j_eps = ev.j_eps;
      state.nonlocal = ev.psi;
    }
    best = state;
    int iter = 0;
    while (state.el_residual > config.el_tolerance && iter < config.max_iters) {
      try {
        MinimizerState next = fixed_point_step(state, config.damping, J);
        next.history.back().iter = ++iter;
        state = std::move(next);
      } catch (const StagnationError&) {
        best.stagnated = true;
        best.warnings.push_back("stagnation at eps = " + std::to_string(eps));
        return best;
      }
      if (state.j_eps <= best.j_eps) best = state;
      if (std::abs(state.F.volume() - config.volume) > kVolumeTolerance * config.volume) {
        throw InvariantViolation("minimize: volume constraint drifted");
      }
    }
    if (state.el_residual > config.el_tolerance) {
      state.warnings.push_back("max_iters reached at eps = " + std::to_string(eps));
    }
  }
  return state;
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history) {
  os << "eps,iter,J_eps,residual,damping\n" << std::setprecision(17);
  for (const HistoryRow& r : history) {
    os << r.eps << ',' << r.iter << ',' << r.j_eps << ',' << r.residual << ',' << r.damping << '\n';
  }
}

void write_field_csv(std::ostream& os, const DensityField& F) {
  const QuadratureGrid& g = F.grid();
  os << "eta,xi1,xi2,F\n" << std::setprecision(17);
  std::size_t n = 0;
  for (int i = 0; i < g.n_eta(); ++i) {
    for (int k1 = 0; k1 < g.n_angle(); ++k1) {
      for (int k2 = 0; k2 < g.n_angle(); ++k2) {
        os << g.ring_eta(i) << ',' << g.xi(k1) << ',' << g.xi(k2) << ',' << F[n++] << '\n';
      }
    }
  }
}

PlhCoefficients log_coefficients(const DensityField& F, int J) {
  return project_tau(F.grid(), F.log_values(), J);
}

}  // namespace crlhls
