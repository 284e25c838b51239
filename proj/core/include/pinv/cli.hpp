#pragma once

// Command-line driver: `pinv verify`, `pinv vcs` and `pinv oracle`.

#include <iosfwd>
#include <string>

namespace pinv::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kInvalid = 1,       // some VC invalid / invariant violated
    kInconclusive = 2,  // unknown, timeout, or exploration cap reached
    kError = 3,         // parse, symmetry, configuration or IO errors
};

/// Runs the command line `argv` and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Removes every "elapsed_ms" member from a JSON report so that runs can be
/// compared byte for byte.
std::string stripElapsed(const std::string& reportJson);

} // namespace pinv::cli
