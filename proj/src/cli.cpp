#include "crlhls/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/functionals.hpp"
#include "crlhls/heisenberg.hpp"
#include "crlhls/mass_green.hpp"
#include "crlhls/minimizer.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/spectral_ops.hpp"

namespace crlhls::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const double kLn2 = std::log(2.0);

int pick(int value, int fallback) { return value > 0 ? value : fallback; }
double pick(double value, double fallback) { return value > 0.0 ? value : fallback; }

GridPtr grid_for(const RunConfig& c, int J) {
  const int degree = pick(c.grid, 2 * J);
  return std::make_shared<const QuadratureGrid>(QuadratureGrid::for_degree(degree));
}

json grid_json(const QuadratureGrid& g) {
  return {{"n_eta", g.n_eta()}, {"n_angle", g.n_angle()}, {"exactness", g.exactness_degree()}, {"nodes", g.size()}};
}

fs::path artifact(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw InvalidArgument("cannot write " + p.string());
  return os;
}

json echo(const RunConfig& c) {
  // Unset values echo as null; the command-specific effective values sit beside them.
  auto opt = [](auto v) { return v > 0 ? json(v) : json(nullptr); };
  return {{"command", c.command}, {"field", c.field},   {"degree", opt(c.degree)},
          {"grid", opt(c.grid)},  {"seed", c.seed},     {"eps_schedule", c.eps_schedule},
          {"tol", opt(c.tol)},    {"out", c.out},       {"n", opt(c.n)},
          {"start", c.start}};
}

// ---------------------------------------------------------------- commands

CommandResult cmd_constants(const RunConfig& c) {
  const int J = pick(c.degree, 200);
  const double tol = pick(c.tol, 1e-3);
  const SpherePoint p{cplx(1.0, 0.0), cplx(0.0, 0.0)};
  const double extrapolated = robin_mass_extrapolated(
      [J](const SpherePoint& a, const SpherePoint& b) { return green_spectral(a, b, J); }, p, 0.8);
  json nu = json::array();
  for (int j = 1; j <= 10; ++j) nu.push_back({{"j", j}, {"nu", eigenvalue(j)}});
  const double err = std::abs(extrapolated - kSphereMass);
  json s = {{"gamma3", kGamma3},
            {"V", kVolume},
            {"mass", kSphereMass},
            {"total_mass", kSphereTotalMass},
            {"q_prime", kSphereQPrime},
            {"nu", nu},
            {"mass_spectral_extrapolated", extrapolated},
            {"spectral_J", J},
            {"extrapolation_error", err},
            {"tolerances", {{"extrapolation", tol}}},
            {"pass", err <= tol}};
  return {s, err <= tol ? kPass : kInvariantViolation};
}

CommandResult cmd_mass(const RunConfig& c) {
  const int J = pick(c.degree, 16);
  const double tol = pick(c.tol, 1e-10);
  GridPtr g = grid_for(c, J);
  const DensityField F = parse_field_spec(c.field, g, c.seed);
  const MassReport report = mass_transform(F, J);
  const fs::path csv = artifact(c, "mass_field.csv");
  {
    std::ofstream os = open_out(csv);
    report.write_field_csv(os, *g);
  }
  // Identity between total masses and the LHLS functional at V_F = V.
  const double lhs = report.total_mass - kSphereTotalMass;
  const double rhs = lhls_residual(F, J);
  const double gap = std::abs(lhs - rhs);
  json s = report.to_json(csv.string());
  s["J"] = J;
  s["grid"] = grid_json(*g);
  s["volume"] = F.volume();
  s["mass_difference"] = lhs;
  s["lhls_residual"] = rhs;
  s["identity_gap"] = gap;
  s["tolerances"] = {{"identity", tol}};
  s["pass"] = gap <= tol;
  return {s, gap <= tol ? kPass : kInvariantViolation};
}

CommandResult cmd_sweep(const RunConfig& c) {
  SweepConfig cfg;
  cfg.seed = c.seed;
  cfg.count = pick(c.n, 100);
  cfg.J = pick(c.degree, 12);
  const double tol = pick(c.tol, 1e-9);
  GridPtr g = grid_for(c, cfg.J);
  const auto rows = lhls_sweep(g, cfg);
  const fs::path csv = artifact(c, "lhls_sweep.csv");
  {
    std::ofstream os = open_out(csv);
    write_sweep_csv(os, rows);
  }
  json s = sweep_summary(rows);
  const bool ok = s["min_residual"].get<double>() >= -tol;
  s["J"] = cfg.J;
  s["sample_degree"] = cfg.degree;
  s["amplitude"] = cfg.amplitude;
  s["grid"] = grid_json(*g);
  s["csv_path"] = csv.string();
  s["tolerances"] = {{"min_residual", -tol}};
  s["pass"] = ok;
  return {s, ok ? kPass : kInvariantViolation};
}

CommandResult cmd_eig(const RunConfig& c) {
  const int J = pick(c.degree, 28);
  const double tol = pick(c.tol, 1e-9);
  GridPtr g = grid_for(c, J);
  const DensityField F = parse_field_spec(c.field, g, c.seed);
  const ConformalFrame frame = ConformalFrame::build(F, J);
  const int available = real_dimension(J) - 1;
  const int count = std::min(pick(c.n, 800), available);
  const std::vector<double> ev = conformal_eigenvalues(frame, count);
  const fs::path csv = artifact(c, "eig_spectrum.csv");
  {
    std::ofstream os = open_out(csv);
    write_spectrum_csv(os, ev);
  }
  double head = 0.0;
  for (int k = 0; k < std::min(4, count); ++k) head += 1.0 / ev[k];
  const double target = lhls_residual(F, J);
  json traces = json::array();
  for (int K : {4, 50, 200, 800}) {
    if (K > count) continue;
    traces.push_back({{"K", K}, {"difference", truncated_trace_difference(frame, K)}});
  }
  const bool ok = head >= 0.25 - tol;
  json s = {{"J", J},
            {"grid", grid_json(*g)},
            {"eigenvalue_count", count},
            {"first", std::vector<double>(ev.begin(), ev.begin() + std::min(8, count))},
            {"sum_inverse_first4", head},
            {"truncated_trace", traces},
            {"lhls_residual", target},
            {"csv_path", csv.string()},
            {"tolerances", {{"sum_inverse_first4", 0.25 - tol}}},
            {"pass", ok}};
  return {s, ok ? kPass : kInvariantViolation};
}

DensityField minimizer_start(const RunConfig& c, GridPtr g, int J) {
  if (c.start == "random") {
    const PlhCoefficients u = random_bounded_pluriharmonic(c.seed, 0, 4, 1.5, *g, J);
    return normalize_to_volume(exp_field(g, u), kVolume);
  }
  if (c.start == "constant") return constant_field(g, 1.0);
  if (c.start == "extremal") {
    std::mt19937_64 rng = seeded_engine(c.seed, 0);
    return normalize_to_volume(jacobian_field(g, random_automorphism(rng, 0.5)), kVolume);
  }
  throw InvalidArgument("--start must be random, constant or extremal");
}

CommandResult cmd_minimize(const RunConfig& c) {
  MinimizerConfig cfg;
  cfg.degree = pick(c.degree, 32);
  if (!c.eps_schedule.empty()) cfg.eps_schedule = c.eps_schedule;
  cfg.validate();
  const double tol = pick(c.tol, 1e-3);
  const int J = cfg.degree;
  GridPtr g = grid_for(c, J);
  const DensityField F0 = minimizer_start(c, g, J);
  const MinimizerState st = minimize(cfg, F0);

  const fs::path hist = artifact(c, "minimize_history.csv");
  const fs::path field = artifact(c, "minimize_field.csv");
  {
    std::ofstream os = open_out(hist);
    write_history_csv(os, st.history);
  }
  {
    std::ofstream os = open_out(field);
    write_field_csv(os, st.F);
  }
  const double j = j_functional(st.F, J).total;
  const MassReport m = mass_transform(st.F, J);
  const double spread = m.max() - m.min();
  const double res = lhls_residual(st.F, J);
  const bool ok = std::abs(j - 0.25 * kLn2) <= tol && spread <= tol && res <= 1e-4;
  json s = {{"J", J},
            {"grid", grid_json(*g)},
            {"start", c.start},
            {"eps_schedule", cfg.eps_schedule},
            {"damping", cfg.damping},
            {"iterations", st.history.size()},
            {"final_J", j},
            {"target_J", 0.25 * kLn2},
            {"el_residual", st.el_residual},
            {"lagrange", st.lagrange},
            {"mass_min", m.min()},
            {"mass_max", m.max()},
            {"lhls_residual", res},
            {"stagnated", st.stagnated},
            {"warnings", st.warnings},
            {"log_coefficients", log_coefficients(st.F, J).to_json()},
            {"history_csv_path", hist.string()},
            {"field_csv_path", field.string()},
            {"tolerances", {{"J", tol}, {"mass_spread", tol}, {"lhls_residual", 1e-4}}},
            {"pass", ok}};
  return {s, ok ? kPass : kInvariantViolation};
}

CommandResult cmd_heis(const RunConfig& c) {
  const double tol = pick(c.tol, 1e-2);
  const int samples = pick(c.n, 4);
  const auto levels = refinement_study(AutHeisParams{}, default_refinement_levels());
  json lv = json::array();
  bool decreasing = true;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    lv.push_back(to_json(levels[k]));
    if (k > 0 && std::abs(levels[k].deficit) > 1.1 * std::abs(levels[k - 1].deficit)) decreasing = false;
  }
  const RefinementLevel& desk = default_refinement_levels()[1];
  const HeisGrid grid = HeisGrid::tensor(desk.box, desk.nx, desk.ny, desk.nt, desk.stretch, desk.stretch_t);
  {
    std::ofstream os = open_out(artifact(c, "heis_cayley.grid"));
    grid.sampled(cayley_jacobian).write(os);
  }
  std::mt19937_64 rng = seeded_engine(c.seed, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  json family = json::array();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const cplx w(0.35 * u(rng), 0.35 * u(rng));
    const cplx lambda(std::norm(w) + 0.9 + 0.4 * u(rng), 0.5 * u(rng));
    const AutHeisParams p = AutHeisParams::normalized(lambda, w);
    const double d =
        sharp_lhls_deficit(grid.sampled([&](const HeisPoint& x) { return heis_jacobian(p, x); }).normalized(kOmega3));
    worst = std::max(worst, std::abs(d));
    family.push_back({{"lambda", {lambda.real(), lambda.imag()}}, {"w", {w.real(), w.imag()}}, {"deficit", d}});
  }
  const double cayley_deficit = levels[1].deficit;
  const bool ok = std::abs(cayley_deficit) <= tol && decreasing && worst <= 2.0 * tol;
  json s = {{"cayley_deficit", cayley_deficit},
            {"refinement", lv},
            {"refinement_decreasing", decreasing},
            {"family", family},
            {"family_max_abs_deficit", worst},
            {"grid_path", artifact(c, "heis_cayley.grid").string()},
            {"tolerances", {{"cayley_deficit", tol}, {"family_deficit", 2.0 * tol}, {"refinement_noise", 0.1}}},
            {"pass", ok}};
  return {s, ok ? kPass : kInvariantViolation};
}

// Compact invariant suite at small sizes.
CommandResult cmd_verify(const RunConfig& c) {
  const double tol = pick(c.tol, 1e-8);
  const int J = pick(c.degree, 8);
  GridPtr g = grid_for(c, J);
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, double value, double bound, bool ok) {
    checks.push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
    all = all && ok;
  };

  double identity = 0.0, inverse_gap = 0.0, eig_head = 1.0;
  for (int k = 0; k < 5; ++k) {
    const DensityField F = random_density(g, c.seed, k, 3, 1.0);
    identity = std::max(identity, std::abs(mass_transform(F, J).total_mass - kSphereTotalMass - lhls_residual(F, J)));
    const ConformalFrame frame = ConformalFrame::build(F, J);
    const DensityField f = random_density(g, c.seed + 1, k, 3, 1.0);
    const PlhCoefficients a = conformal_inverse_apply(F, f.values(), J);
    const PlhCoefficients b = conformal_inverse_galerkin(frame, f.values());
    inverse_gap = std::max(inverse_gap, (a - b).norm() / std::max(1.0, b.norm()));
    const auto ev = conformal_eigenvalues(frame, 4);
    double head = 0.0;
    for (double x : ev) head += 1.0 / x;
    eig_head = std::min(eig_head, head);
  }
  record("mass_identity", identity, tol, identity <= tol);
  record("conformal_inverse_formula_vs_galerkin", inverse_gap, tol, inverse_gap <= tol);
  record("sum_inverse_first4_min", eig_head, 0.25 - 1e-9, eig_head >= 0.25 - 1e-9);

  SweepConfig sw;
  sw.seed = c.seed;
  sw.count = 10;
  sw.degree = 3;
  sw.amplitude = 1.0;
  sw.J = J;
  const double min_res = sweep_summary(lhls_sweep(g, sw))["min_residual"].get<double>();
  record("lhls_sweep_min_residual", min_res, -1e-9, min_res >= -1e-9);

  double extremal = 0.0;
  std::mt19937_64 rng = seeded_engine(c.seed, 1);
  for (int k = 0; k < 3; ++k) {
    const DensityField F = normalize_to_volume(jacobian_field(g, random_automorphism(rng, 0.3)), kVolume);
    extremal = std::max(extremal, std::abs(lhls_residual(F, J)));
  }
  record("lhls_extremal_abs_residual", extremal, 1e-4, extremal <= 1e-4);

  const GeometricMass gm = q_prime_and_geometric_mass(*g);
  double qdev = 0.0;
  for (double q : gm.q_prime) qdev = std::max(qdev, std::abs(q - kSphereQPrime));
  record("sphere_q_prime", qdev, tol, qdev <= tol);

  std::mt19937_64 hr = seeded_engine(c.seed, 2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double inv = 0.0;
  for (int k = 0; k < 100; ++k) {
    const HeisPoint a{cplx(u(hr), u(hr)), u(hr)}, b{cplx(u(hr), u(hr)), u(hr)}, h{cplx(u(hr), u(hr)), u(hr)};
    inv = std::max(inv, std::abs(koranyi_distance(group_mul(a, h), group_mul(b, h)) - koranyi_distance(a, b)));
  }
  record("koranyi_translation_invariance", inv, 1e-12, inv <= 1e-12);

  const HeisGrid hg = HeisGrid::tensor({4.0, 4.0, 16.0}, 8, 8, 8, 2.0, 3.5).sampled(cayley_jacobian);
  const double scaling = std::abs(j_heisenberg(hg.dilated(2.5)) - j_heisenberg(hg));
  record("heisenberg_scaling_invariance", scaling, tol, scaling <= tol);

  json s = {{"J", J}, {"grid", grid_json(*g)}, {"checks", checks}, {"tolerances", {{"default", tol}}}, {"pass", all}};
  return {s, all ? kPass : kInvariantViolation};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"constants", "mass",       "lhls-sweep", "eig",
                                                 "minimize",  "heis-check", "verify"};
  return names;
}

DensityField parse_field_spec(const std::string& spec, GridPtr grid, std::uint64_t seed) {
  if (spec == "const") return constant_field(grid, 1.0);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> args;
  {
    std::stringstream ss(tail);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        args.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InvalidArgument("field spec: bad number '" + item + "'");
      }
    }
  }
  if (head == "extremal") {
    if (args.size() != 4) throw InvalidArgument("field spec: extremal needs 4 numbers");
    const AutSphereParams p = AutSphereParams::normalized(cplx(args[0], args[1]), cplx(args[2], args[3]));
    return normalize_to_volume(jacobian_field(grid, p), kVolume);
  }
  if (head == "random") {
    if (args.size() > 1) throw InvalidArgument("field spec: random takes at most an index");
    const auto index = args.empty() ? std::uint64_t{0} : static_cast<std::uint64_t>(args[0]);
    return random_density(grid, seed, index, 6, 2.0);
  }
  throw InvalidArgument("field spec: expected const, extremal:... or random[:index]");
}

CommandResult run(const RunConfig& config) {
  CommandResult r;
  try {
    if (config.command == "constants") r = cmd_constants(config);
    else if (config.command == "mass") r = cmd_mass(config);
    else if (config.command == "lhls-sweep") r = cmd_sweep(config);
    else if (config.command == "eig") r = cmd_eig(config);
    else if (config.command == "minimize") r = cmd_minimize(config);
    else if (config.command == "heis-check") r = cmd_heis(config);
    else if (config.command == "verify") r = cmd_verify(config);
    else {
      r.summary = {{"error", "unknown command: " + config.command}};
      r.exit_code = kUnknownCommand;
    }
  } catch (const UnderResolvedError& e) {
    r.summary = {{"error", e.what()}};
    r.exit_code = kUnderResolved;
  } catch (const InvariantViolation& e) {
    r.summary = {{"error", e.what()}};
    r.exit_code = kInvariantViolation;
  } catch (const InvalidArgument& e) {
    r.summary = {{"error", e.what()}};
    r.exit_code = kConfigError;
  }
  r.summary["inputs"] = echo(config);
  r.summary["exit_code"] = r.exit_code;
  return r;
}

}  // namespace crlhls::cli
