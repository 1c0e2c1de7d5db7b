#pragma once

#include <exception>
#include <ostream>
#include <string>
#include <vector>

namespace seernf::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // a stage failed at run time
inline constexpr int kExitMissingFile = 2;
inline constexpr int kExitInvalid = 3;     // inputs parsed but failed validation
inline constexpr int kExitUsage = 64;

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

}  // namespace seernf::cli
