#include "kv/csv.hpp"

#include <charconv>
#include <cmath>

#include "kv/errors.hpp"

namespace kv::csv {

std::vector<std::string> split_line(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"' && current.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

double parse_number(std::string_view text, std::string_view column, std::size_t line_no) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    throw ParseError(line_no, "column " + std::string(column) + ": not a number '" +
                                  std::string(text) + "'");
  if (!std::isfinite(value))
    throw ParseError(line_no, "column " + std::string(column) + ": non-finite value");
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::string_view column,
                                     std::size_t line_no) {
  if (text.find_first_not_of(' ') == std::string_view::npos) return std::nullopt;
  return parse_number(text, column, line_no);
}

std::vector<Row> read_table(std::istream& in, std::string_view expected_header) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t arity = 0;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!have_header) {
      if (line != expected_header)
        throw ParseError(line_no, "expected header '" + std::string(expected_header) + "'");
      have_header = true;
      arity = split_line(line, line_no).size();
      continue;
    }
    auto fields = split_line(line, line_no);
    if (fields.size() != arity)
      throw ParseError(line_no, "expected " + std::to_string(arity) + " fields, got " +
                                    std::to_string(fields.size()));
    rows.push_back({line_no, std::move(fields)});
  }
  if (!have_header) throw ParseError(0, "no cases: missing header");
  return rows;
}

}  // namespace kv::csv
