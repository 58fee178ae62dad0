#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpspline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Subcommands: fit, predict, simulate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpspline::cli
