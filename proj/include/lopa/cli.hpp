#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lopa::cli {

/// Exit codes: 0 pass, 1 condition fails, 2 invalid input or usage.
enum ExitCode : int { kPass = 0, kFail = 1, kInvalid = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lopa::cli
