#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace discotk::tsv {

std::vector<std::string_view> split(std::string_view line, char sep = '\t');

/// Strips a trailing '\r'. Returns false for blank lines.
bool clean_line(std::string& line);

/// Finite decimal number; throws DataError mentioning `where` otherwise.
double parse_real(std::string_view field, const std::string& where);

/// Strictly positive integer; throws DataError mentioning `where` otherwise.
int parse_positive_int(std::string_view field, const std::string& where);

}  // namespace discotk::tsv
