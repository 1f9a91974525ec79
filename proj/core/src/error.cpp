#include "symtherm/error.hpp"

namespace symtherm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kUnsupportedSpec: return "unsupported-spec";
    case ErrorKind::kInsufficientContext: return "insufficient-context";
    case ErrorKind::kIndeterminate: return "indeterminate";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kEmptyLevelSet: return "empty-level-set";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kCapacity: return "capacity";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kNumerical: return 3;
    case ErrorKind::kCapacity: return 4;
    default: return 2;
  }
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace symtherm
