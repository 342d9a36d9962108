#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trustgate::cli {

enum ExitCode : int {
    kOk = 0,
    // A security property or the protocol order was violated.
    kViolation = 1,
    kInvalidInput = 2,
    kInternalError = 3,
};

// Runs the command line (without the program name). Machine-readable JSON
// goes to `out`, the human summary and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace trustgate::cli
