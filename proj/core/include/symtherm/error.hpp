#pragma once

#include <stdexcept>
#include <string>

namespace symtherm {

enum class ErrorKind {
  kValidation,           // malformed input or violated invariant
  kUnsupportedSpec,      // shift is not topologically mixing
  kInsufficientContext,  // prefix too short to determine the requested value
  kIndeterminate,        // points not separated at the available precision
  kInfeasible,           // hypothesis of a construction fails
  kEmptyLevelSet,        // exponent outside [alpha-, alpha+]
  kPrecondition,         // other operation precondition
  kNumerical,            // iteration did not converge
  kCapacity,             // enumeration guard tripped
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-convergence of an iterative solver. Carries the last certified bracket.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double lower, double upper)
      : Error(ErrorKind::kNumerical, what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit code used by the command line tool: 2 for validation and
/// precondition failures, 3 for numerical non-convergence, 4 for capacity.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace symtherm
