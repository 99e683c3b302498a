#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ecodeps {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 data error, 2 usage error.
enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsage = 2 };

/// Runs the command-line front end. `args` excludes the program name.
/// Results go to `out`; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecodeps
