#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkdrates::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kNoConvergence = 3,
    kBudget = 4,
};

// Runs one command line.  args excludes the program name.  Results go to out
// (or to --output), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkdrates::cli
