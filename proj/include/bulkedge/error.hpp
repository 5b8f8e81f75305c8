#pragma once

#include <stdexcept>
#include <string>

namespace bulkedge {

enum class ErrorCode {
  config,
  integration,
  energy_in_band,
  gap_closed,
  window_too_small,
  refinement_exhausted,
  non_integer_winding,
  non_regular_value,
  no_regular_energy,
  frame_discontinuity,
  grid_too_coarse,
  zero_in_spectrum,
  modulus_deviation,
  branch_matching,
  assertion,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Step-size underflow or step-count exhaustion inside the ODE kernel.
class IntegrationError : public Error {
 public:
  IntegrationError(double last_x, const std::string& what)
      : Error(ErrorCode::integration, what), last_x_(last_x) {}
  double last_x() const { return last_x_; }

 private:
  double last_x_;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(ErrorCode::config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An index identity that the numerics refused to confirm.
class AssertionFailure : public Error {
 public:
  explicit AssertionFailure(const std::string& what) : Error(ErrorCode::assertion, what) {}
};

}  // namespace bulkedge
