#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavecho::csv {

/// Shortest decimal text that parses back to the identical double.
std::string format_number(double value);

double parse_number(std::string_view text);
long long parse_integer(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view text);

}  // namespace wavecho::csv
