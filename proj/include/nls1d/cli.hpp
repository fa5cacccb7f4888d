#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nls1d {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,     ///< hypothesis fails or certificate inconclusive
  kExitInput = 2,
  kExitNumerical = 3,
};

/// Parses args (without the program name), runs one subcommand, writes the
/// JSON report to out and a one-line reason to err on failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nls1d
