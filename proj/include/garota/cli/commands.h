#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace garota::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // an expectation or formula failed
inline constexpr int kExitError = 2;   // usage, load or parse error

// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace garota::cli
