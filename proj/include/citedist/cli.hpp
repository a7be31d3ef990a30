#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace citedist {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitIncomplete = 3,
};

/// Runs the command line `args` (without the program name).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace citedist
