#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mosgnn::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Runs one command line (args[0] is the program name). Normal output goes to
/// `out`; resolved configuration, progress and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mosgnn::cli
