#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsquad::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInvalidInput = 2, kNonConvergence = 3 };

/// Runs one command line (without the program name). The payload goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsquad::cli
