#pragma once

#include <stdexcept>
#include <string>

namespace bcs {

// Physical/domain preconditions violated (no superconducting phase predicted,
// a >= 0 where a < 0 is required, no root in bracket, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quadrature / extrapolation / eigensolve did not reach the requested
// accuracy.  Carries the estimated residual.
struct AccuracyError : std::runtime_error {
  double residual;
  AccuracyError(const std::string& msg, double res)
      : std::runtime_error(msg + " (residual " + std::to_string(res) + ")"),
        residual(res) {}
};

// NaN/Inf propagation, eigensolver failure, ill-conditioned solve.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver ran out of iterations.  Carries the last residual.
struct ConvergenceError : std::runtime_error {
  double last_residual;
  int iterations;
  ConvergenceError(const std::string& msg, double res, int it)
      : std::runtime_error(msg + " (residual " + std::to_string(res) +
                           " after " + std::to_string(it) + " iterations)"),
        last_residual(res), iterations(it) {}
};

// Malformed configuration, unknown keys, bad file formats, aliasing guard.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bcs
