#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace contact::cli {

enum ExitCode { kSuccess = 0, kConfigError = 1, kModelFailure = 2 };

// Parses `args` (without the program name), runs one subcommand and returns
// the process exit code. Data goes to files or `out`; diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contact::cli
