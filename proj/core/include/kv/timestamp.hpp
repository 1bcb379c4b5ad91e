#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace kv {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Parses ISO-8601 UTC: YYYY-MM-DDTHH:MM:SS[.ffffff](Z|+00:00). A space is
/// accepted in place of 'T'. Throws ParseError (line 0) on anything else.
Timestamp parse_timestamp(std::string_view text);

/// YYYY-MM-DDTHH:MM:SS.ffffffZ; fractional digits omitted when zero.
std::string format_timestamp(Timestamp ts);

Timestamp now_utc();

}  // namespace kv
