#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace neurowf {

/// A parsed CSV file: one header row plus data rows of equal width. Fields are
/// split on commas; quoting is not supported (writers reject fields that would
/// need it).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// File line number of each data row (header is line 1).
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(const std::string& name) const;
    /// Column index or InvalidInput naming the missing column.
    std::size_t require_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Parses a field as double; the error message carries the file line number
/// and column name.
double parse_csv_double(const std::string& field, std::size_t line_number,
                        const std::string& column);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Writes content to path atomically (temp file in the same directory, then
/// rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// Joins fields with commas; throws InvalidInput if a field contains a comma,
/// quote, or newline.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace neurowf
