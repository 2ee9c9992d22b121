#pragma once

#include <ostream>

namespace cdmapower::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad flags or config
inline constexpr int kExitGateFailed = 2;  // compare --gate found a failing point
inline constexpr int kExitRuntime = 3;     // numerical or I/O failure

// Entry point of the `cdmapower` tool. Writes results to `out` unless
// --output names a file or directory.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cdmapower::cli
