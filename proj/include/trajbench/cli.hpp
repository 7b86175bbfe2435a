#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trajbench::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1; ///< validation, parse or I/O failure
inline constexpr int exit_usage = 2;   ///< unknown command or flag

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

} // namespace trajbench::cli
