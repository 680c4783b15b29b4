#include "discotk/tsv.hpp"

#include <charconv>
#include <cmath>

#include "discotk/error.hpp"

namespace discotk::tsv {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool clean_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.find_first_not_of(" \t") != std::string::npos;
}

double parse_real(std::string_view field, const std::string& where) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw DataError(where + ": not a finite number: '" + std::string(field) + "'");
  return value;
}

int parse_positive_int(std::string_view field, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value <= 0)
    throw DataError(where + ": not a positive integer: '" + std::string(field) + "'");
  return value;
}

}  // namespace discotk::tsv
