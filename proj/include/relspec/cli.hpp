#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relspec::cli {

/// Exit-code contract shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kLintThreshold = 1,
    kParseOrConfigError = 2,
    kUnknownEntity = 3,
};

/// Environment variable naming the default lint configuration file.
inline constexpr const char* kConfigEnv = "RELSPEC_CONFIG";

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace relspec::cli
