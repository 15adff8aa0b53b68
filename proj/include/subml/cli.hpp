#pragma once

#include <ostream>

namespace subml {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,     // anything not covered below, including failed validate checks
    kExitInfeasible = 2,  // solve-beta: target cannot be reached
    kExitNoConvergence = 3,
    kExitConfig = 4,      // bad flag value or config file entry
    kExitSweepAborted = 5 // sweep could not solve beta at one SNR
};

// Entry point of the `subml` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace subml
