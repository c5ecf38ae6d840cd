#pragma once

// Small text helpers shared by the file-format code: RFC 4180 style CSV
// fields, number formatting, whole-file IO.

#include <string>
#include <string_view>
#include <vector>

namespace imprint::detail {

std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

// Parses CSV text into records. Quoted fields may contain commas, doubled
// quotes and newlines. Blank lines are skipped; a trailing CR is dropped.
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_roundtrip(double value);
// Fixed notation with `decimals` digits; "-0.000000" is normalized to "0.000000".
std::string format_fixed(double value, int decimals = 6);

double parse_double(std::string_view text);

std::string read_file(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace imprint::detail
