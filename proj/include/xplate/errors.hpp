#ifndef XPLATE_ERRORS_HPP
#define XPLATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xplate {

/// Bad run configuration (unknown key, unparseable value, out-of-range
/// input). Carries the offending line when parsed from text.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_number(line) {}
  int line_number = 0;
};

/// Numerical failure: singular factorization, eigensolver non-convergence,
/// missing positive buckling eigenvalue.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The hygrothermal preload alone destabilises the plate: K + K_R is
/// indefinite. A legitimate physical finding, reported separately.
struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& msg, double eigenvalue = 0.0)
      : std::runtime_error(msg), offending_eigenvalue(eigenvalue) {}
  double offending_eigenvalue = 0.0;
};

}  // namespace xplate

#endif
