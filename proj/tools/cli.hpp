#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hsplab::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitMismatch = 3;

// Runs the tool with argv[1..] in `args`. The JSON report goes to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hsplab::cli
