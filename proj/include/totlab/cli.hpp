#pragma once

#include <iosfwd>

#include "totlab/errors.hpp"

namespace totlab::cli {

inline constexpr const char* kVersion = "1.0.0";

// 1 for bad input of any kind, 2 for resource limits, 3 for failed
// internal consistency checks.
int exit_code(ErrorKind kind);

// Parses argv, dispatches one subcommand and returns the process exit code.
// Results go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace totlab::cli
