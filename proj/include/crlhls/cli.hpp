#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlhls/density_field.hpp"

namespace crlhls::cli {

enum ExitCode : int {
  kPass = 0,
  kInvariantViolation = 2,
  kConfigError = 3,
  kUnderResolved = 4,
  kUnknownCommand = 5,
};

/// Unset numeric fields (negative) take the per-command defaults.
struct RunConfig {
  std::string command;
  std::string field = "const";
  int degree = -1;
  int grid = -1;
  std::uint64_t seed = 0;
  std::vector<double> eps_schedule;
  double tol = -1.0;
  std::string out = ".";
  int n = -1;
  std::string start = "random";
};

struct CommandResult {
  nlohmann::json summary;
  int exit_code = kPass;
};

const std::vector<std::string>& command_names();

/// `const`, `extremal:re1,im1,re2,im2` (normalized |J_k| with w = (re1+i im1, re2+i im2)),
/// or `random[:index]` (normalized exp(u), degree 6, amplitude 2, stream `seed`).
DensityField parse_field_spec(const std::string& spec, GridPtr grid, std::uint64_t seed);

/// Runs one command, writes its artifacts under config.out and returns the
/// JSON summary. Module exceptions are mapped to exit codes.
CommandResult run(const RunConfig& config);

}  // namespace crlhls::cli
