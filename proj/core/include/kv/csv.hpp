#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kv::csv {

/// Splits one record on commas. Double-quoted fields may contain commas and
/// "" escapes. Trailing '\r' is dropped.
std::vector<std::string> split_line(std::string_view line, std::size_t line_no);

/// Parses a whole-field decimal number; throws ParseError naming `column`.
double parse_number(std::string_view text, std::string_view column, std::size_t line_no);

/// Empty cell -> nullopt; otherwise parse_number.
std::optional<double> parse_optional(std::string_view text, std::string_view column,
                                     std::size_t line_no);

struct Row {
  std::size_t line_no = 0;
  std::vector<std::string> fields;
};

/// Reads a header-led table. The header must equal `expected_header`
/// exactly; blank lines are skipped; every row must have the header's arity.
std::vector<Row> read_table(std::istream& in, std::string_view expected_header);

}  // namespace kv::csv
