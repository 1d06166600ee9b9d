#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace microlim {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitReduction = 2;
inline constexpr int kExitNumeric = 3;

// args excludes the program name. Output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace microlim
