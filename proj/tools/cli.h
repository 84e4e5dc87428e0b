#pragma once

#include <iosfwd>

namespace cga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `cga` command line tool. Subcommands: stats, score,
// lowest, evolve, histogram. Returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err);

}  // namespace cga::cli
