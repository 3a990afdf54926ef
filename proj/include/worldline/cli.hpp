#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace worldline {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNonConvergence = 2,
    kExitIo = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace worldline
