#pragma once

#include <stdexcept>
#include <string>

namespace crlhls {

/// A precondition on an argument failed (bad sizes, off-sphere points, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The discretization cannot represent the requested quantity accurately.
class UnderResolvedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked mathematical invariant did not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Backtracking in the minimizer could not find an acceptable step.
class StagnationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crlhls
