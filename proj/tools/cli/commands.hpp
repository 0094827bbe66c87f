#pragma once

#include <iosfwd>

namespace lqcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitReject = 2;
inline constexpr int kExitError = 3;
inline constexpr int kExitUsage = 4;

/// Entry point of the lqcp tool. Reports go to `out`, diagnostics and sampled
/// seeds to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lqcp::cli
