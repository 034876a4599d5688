#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlg::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_check_failed = 2;
inline constexpr int exit_deadlock = 3;
inline constexpr int exit_step_limit = 4;
inline constexpr int exit_budget_cut = 5;

/// Runs one command. `args` excludes the program name.
int run_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mlg::cli
