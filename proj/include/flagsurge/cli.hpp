#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flagsurge {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitInput = 3;

/// Runs `flagsurge <verb> ...` with args excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flagsurge
