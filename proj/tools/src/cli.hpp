#pragma once

#include <iosfwd>

namespace symtherm::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symtherm::cli
