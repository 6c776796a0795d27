#pragma once

namespace tcb::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_campaign = 2;

// Subcommands: generate, emit, run, oracle-check, analyze, plot-data.
// Progress goes to stderr as one JSON object per line.
[[nodiscard]] int dispatch( int argc, const char* const* argv );

} // namespace tcb::cli
