#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sarcasm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeFailure = 3 };

// Runs one command line (args[0] is the program name). Interactive input
// (label, predict without --input) is read from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace sarcasm::cli
