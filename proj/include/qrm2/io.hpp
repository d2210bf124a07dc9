// io.hpp — Long-format tables with a metadata header, written as CSV or JSON.
// CSV floats carry 17 significant digits so data rows round-trip exactly.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace qrm2 {

struct DataTable {
    std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(const std::string& key, const std::string& value);
    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, int value);
};

std::string format_double(double x);  // %.16e, 17 significant digits

// CSV: '# key = value' comment lines, then the header row, then data rows.
void write_csv(const std::filesystem::path& path, const DataTable& table);
DataTable read_csv(const std::filesystem::path& path);

// JSON: one object {"meta": {...}, "columns": [...], "rows": [[...], ...]}.
void write_json(const std::filesystem::path& path, const DataTable& table);
DataTable read_json(const std::filesystem::path& path);

// format is "csv" or "json"
void write_table(const std::filesystem::path& path, const DataTable& table,
                 const std::string& format);
DataTable read_table(const std::filesystem::path& path, const std::string& format);

}  // namespace qrm2
