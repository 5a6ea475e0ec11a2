/// @file errors.hpp
/// @brief Exception types thrown by the solver library.
#pragma once

#include <stdexcept>
#include <string>

namespace couplefv {

/// Root bracketing failed: the target value is not attained on the search interval.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its depth cap without meeting the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or inconsistent sizes passed to a library routine.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration text could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  /// 1-based line of the offending entry, 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace couplefv
