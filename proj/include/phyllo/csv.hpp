#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace phyllo {

/// Numeric table with a versioned schema string and named columns.
///
/// On disk:
///   # <schema>
///   # <free-form comment lines, e.g. key=value metadata>
///   col_a,col_b,...
///   1.0000000000000000,2,...
struct CsvTable {
    std::string schema;
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_string() const;
    /// Column index by name; throws IoError when absent.
    std::size_t column(const std::string& name) const;
};

/// Writes `bytes` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// %.17g formatting.
std::string format_number(double x);

}  // namespace phyllo
