#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ceslab::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,           ///< success, or the checked property holds
  kFailure = 1,      ///< operational error, invalid config, or the property fails
  kPrecondition = 2  ///< lambda in Sigma0 or outside the region a bound applies to
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> read_flat_config(const std::string& path);

}  // namespace ceslab::cli
