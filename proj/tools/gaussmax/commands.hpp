#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaussmax::cli {

/// Process exit codes. Scripts rely on these staying fixed.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDomain = 3,
  kIo = 4,
  kVerificationFailed = 5,
};

/// Runs the command line `args` (args[0] is the program name) writing results
/// to `out` and diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussmax::cli
