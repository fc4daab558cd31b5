#pragma once

#include <stdexcept>
#include <string>

namespace ettrap {

/// Raised when user-supplied configuration cannot be parsed or is out of range.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Raised when a numerical routine fails to reach its accuracy contract
/// (integrator step underflow, eigensolver non-convergence, ambiguous tracking).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ettrap
