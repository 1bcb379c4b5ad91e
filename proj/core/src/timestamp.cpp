#include "kv/timestamp.hpp"

#include <cctype>
#include <cstdio>

#include "kv/errors.hpp"

namespace kv {
namespace {

int digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw ParseError(0, "truncated timestamp '" + std::string(text) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char ch = text[i];
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError(0, "bad timestamp '" + std::string(text) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char ch) {
  if (pos >= text.size() || text[pos] != ch)
    throw ParseError(0, "bad timestamp '" + std::string(text) + "'");
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const int y = digits(text, 0, 4);
  expect(text, 4, '-');
  const int mo = digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = digits(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' '))
    throw ParseError(0, "bad timestamp '" + std::string(text) + "'");
  const int hh = digits(text, 11, 2);
  expect(text, 13, ':');
  const int mm = digits(text, 14, 2);
  expect(text, 16, ':');
  const int ss = digits(text, 17, 2);

  std::size_t pos = 19;
  long long micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (n < 6) micros = micros * 10 + (text[pos] - '0');
      ++n;
      ++pos;
    }
    if (n == 0) throw ParseError(0, "bad timestamp '" + std::string(text) + "'");
    for (; n < 6; ++n) micros *= 10;
  }
  const std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "+00:00")
    throw ParseError(0, "timestamp must be UTC ('Z'): '" + std::string(text) + "'");

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
    throw ParseError(0, "timestamp out of range '" + std::string(text) + "'");
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + microseconds{micros};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<microseconds> tod{ts - day_point};
  char buf[48];
  const long long frac = tod.subseconds().count();
  if (frac == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()), frac);
  }
  return buf;
}

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

}  // namespace kv
