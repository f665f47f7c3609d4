#pragma once

// Command-line front end. Commands: simulate, scan, optimize, unruh, compton,
// plasma, larmor. Exit codes: 0 success, 2 usage or configuration error, 3
// numeric or physics error.

#include <iosfwd>
#include <string>
#include <vector>

namespace vacdiff {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Environment variable naming the output directory when --out is absent.
inline constexpr const char* kOutputDirEnv = "VACDIFF_OUT";

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vacdiff
