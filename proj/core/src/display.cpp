#include "kv/display.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace kv {

double round_half_away(double value, int places) {
  const double scale = std::pow(10.0, places);
  // std::round already rounds halfway cases away from zero.
  return std::round(value * scale) / scale;
}

std::string format_fixed(double value, int places) {
  double rounded = round_half_away(value, places);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, rounded);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace kv
