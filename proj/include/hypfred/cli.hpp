#pragma once

#include "hypfred/grid.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace hypfred {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitResonant = 2;

/// Parses "17x16,33x32,65x64". Throws RangeError on malformed input.
std::vector<Grid> parse_grids(std::string_view spec);

/// Runs one command; returns the process exit code. Human-readable output goes
/// to `out`, diagnostics to `err`, artifacts to the --out directory.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hypfred
