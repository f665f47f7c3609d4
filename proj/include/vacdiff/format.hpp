#pragma once

// Locale-independent number formatting for every file the tools write.

#include <string>

namespace vacdiff {

/// Scientific notation with 9 significant digits, e.g. 1.23456789e-05.
std::string format_sci(double value);

/// Shortest text that parses back to the same double.
std::string format_exact(double value);

}  // namespace vacdiff
