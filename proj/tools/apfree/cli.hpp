#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apfree::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kWitnessFound = 1,
    kUsage = 2,
    kResource = 3,
    kIo = 4,
};

// Entry point of the `apfree` binary; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apfree::cli
