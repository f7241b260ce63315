#pragma once

#include <iosfwd>

namespace tomorisk::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kSolverFailure = 3;
inline constexpr int kImpossibleData = 4;

/// Runs the command line `argv` (argv[0] is the program name). Results go to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tomorisk::cli
