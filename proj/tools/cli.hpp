#pragma once

#include <optional>
#include <ostream>

namespace gigg::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputInvalid = 2;
inline constexpr int kSchemaMismatch = 3;
inline constexpr int kNumericFailure = 4;

// `--threads` if given, else GIGG_THREADS, else the hardware concurrency.
int resolve_threads(std::optional<int> flag);

// Entry point for the `gigg` tool: subcommands fit, simulate and prior.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gigg::cli
