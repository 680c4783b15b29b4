#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace discotk::cli {

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

/// Runs one `discotk` invocation; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discotk::cli
