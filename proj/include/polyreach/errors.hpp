#pragma once

#include <stdexcept>
#include <string>

namespace polyreach {

/* Raised for malformed inputs: bad dimensions, inconsistent data,
 * invalid scenario files.  The CLI maps this to exit code 2. */
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Raised when an iterative solver runs out of its iteration budget.
 * Carries the diagnostics a caller needs to report the failure.
 * The CLI maps this to exit code 3. */
struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, int iterations_done, double residual)
      : std::runtime_error(what), iterations(iterations_done), last_residual(residual) {}
  int iterations;
  double last_residual;
};

}  // namespace polyreach
