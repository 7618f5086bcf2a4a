#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wgnls {

enum class ErrorKind { Shape, Domain, Convergence, Integration, Io, Config, Usage };

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for everything the library reports. The kind drives the
/// CLI exit code (Usage -> 2, everything else -> 1).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Iterative solver gave up; carries the last residual it saw.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double last_residual)
      : Error(ErrorKind::Convergence, message), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Non-finite values appeared during time stepping.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& message, std::size_t step)
      : Error(ErrorKind::Integration, message), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace wgnls
