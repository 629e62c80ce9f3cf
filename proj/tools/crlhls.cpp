#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "crlhls/cli.hpp"

namespace cli = crlhls::cli;

int main(int argc, char** argv) {
  CLI::App app{"CR pluriharmonic LHLS laboratory"};
  app.set_config("--config", "", "flat key=value file; flags override its values");
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunConfig cfg;
  app.add_option("--degree", cfg.degree, "truncation degree J");
  app.add_option("--grid", cfg.grid, "quadrature exactness degree (default 2J)");
  app.add_option("--seed", cfg.seed, "random stream");
  app.add_option("--eps-schedule", cfg.eps_schedule, "decreasing eps values")->delimiter(',');
  app.add_option("--tol", cfg.tol, "pass/fail tolerance");
  app.add_option("--out", cfg.out, "artifact directory");
  app.add_option("--n", cfg.n, "sample or eigenvalue count");
  app.add_option("--start", cfg.start, "minimizer start: random, constant, extremal");

  app.add_subcommand("constants", "gamma3, V, sphere mass and nu table");
  app.add_subcommand("mass", "mass report of a conformal factor")
      ->add_option("field", cfg.field, "const | extremal:a,b,c,d | random[:index]");
  app.add_subcommand("lhls-sweep", "LHLS residual ensemble");
  app.add_subcommand("eig", "conformal spectrum and truncated trace")
      ->add_option("field", cfg.field, "const | extremal:a,b,c,d | random[:index]");
  app.add_subcommand("minimize", "sub-critical minimization of J");
  app.add_subcommand("heis-check", "Heisenberg sharp LHLS deficits");
  app.add_subcommand("verify", "invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    app.exit(e);
    return cli::kUnknownCommand;
  } catch (const CLI::RequiredError& e) {
    app.exit(e);
    return cli::kUnknownCommand;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const cli::CommandResult r = cli::run(cfg);
  const std::string text = r.summary.dump(2);
  std::cout << text << '\n';
  if (r.exit_code != cli::kConfigError) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream(std::filesystem::path(cfg.out) / (cfg.command + ".json")) << text << '\n';
  }
  return r.exit_code;
}
