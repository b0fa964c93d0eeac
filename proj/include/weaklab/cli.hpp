#pragma once

// Command-line front end. Commands: scenario, simulate, sweep, optimize,
// sample, bounds. Exit codes: 0 success, 1 numeric failure, 2 input error.

#include <iosfwd>

namespace weaklab {

inline constexpr const char* kVersion = "weaklab 1.0.0";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weaklab
