#pragma once

#include <iosfwd>

namespace lpq {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitViolated = 1, // some certificate has satisfied = false
    kExitInput = 2,    // bad flags, specs or preconditions
    kExitNumerical = 3 // divergence or numerical failure
};

/// Runs `lpq <subcommand> ...` with the given streams; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lpq
