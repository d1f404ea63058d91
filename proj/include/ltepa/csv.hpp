#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ltepa::csv {

// Shortest decimal representation that parses back to the same double.
std::string format(double value);
std::string format(int value);
std::string format(bool value);

// Strict parsers: the whole field must be consumed.
double parse_double(std::string_view field);
int parse_int(std::string_view field);
bool parse_bool(std::string_view field);

std::vector<std::string_view> split_line(std::string_view line, char delim = ',');

// Splits file content into lines, dropping a trailing empty line.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace ltepa::csv
