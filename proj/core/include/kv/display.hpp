#pragma once

#include <string>

namespace kv {

/// Rounds half away from zero to `places` decimal places.
double round_half_away(double value, int places);

/// Fixed-point text of round_half_away(value, places).
std::string format_fixed(double value, int places);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace kv
