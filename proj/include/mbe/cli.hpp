#pragma once

#include <iosfwd>

namespace mbe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point for the `mbe` tool. Reports go to files named by --out (or to
// `out` when --out is omitted); human-readable summaries go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mbe::cli
