#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace angio::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kUndefinedMetric = 3,
};

/// Runs the command line `args` (args[0] is the program name). Diagnostics
/// go to `err`; nothing is written to `out` except help text.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace angio::cli
