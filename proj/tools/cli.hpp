#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cevarep::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kPass = 0, kViolated = 1, kRefused = 2, kError = 3 };

/// Runs the command line `args` (without the program name). Machine output
/// goes to `out` as a single JSON document, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cevarep::cli
