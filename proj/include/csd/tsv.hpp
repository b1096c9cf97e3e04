#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csd::tsv {

using Row = std::vector<std::string>;

/// Parsed TSV with the 1-based source line number of every row kept for error messages.
struct Table {
    std::vector<Row> rows;
    std::vector<std::size_t> line_numbers;
};

/// Reads a tab-separated file. Blank lines are skipped, trailing '\r' is stripped.
Table read(const std::filesystem::path& path);
Table parse(std::string_view text);

Row split(std::string_view line);

/// Strict decimal parse of the whole field; nullopt when the field is not a number.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

/// Shortest round-trip-safe representation (17 significant digits).
std::string format_double(double value);

/// Writes the content to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace csd::tsv
