#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phyred::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;

/// Runs one subcommand. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phyred::cli
