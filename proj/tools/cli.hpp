#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ym::cli {

enum ExitCode : int {
  kSuccess = 0,
  kParseFailure = 1,
  kValidationFailure = 2,
  kVerificationFailure = 3,
};

/// Runs one command line (without the program name); diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ym::cli
