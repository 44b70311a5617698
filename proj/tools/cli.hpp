#pragma once

#include <iosfwd>

namespace halfline::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitRefused = 2;
inline constexpr int kExitVerdictFailed = 3;

// Parses argv and runs the selected subcommand. Never throws; the return value
// is the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfline::cli
