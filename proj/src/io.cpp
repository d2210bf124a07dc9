#include "qrm2/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrm2 {

void DataTable::add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
}
void DataTable::add_meta(const std::string& key, double value) {
    meta.emplace_back(key, format_double(value));
}
void DataTable::add_meta(const std::string& key, int value) {
    meta.emplace_back(key, std::to_string(value));
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void write_csv(const std::filesystem::path& path, const DataTable& table) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : table.meta) out << "# " << key << " = " << value << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_csv: row width differs from column count");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

DataTable read_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    DataTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
                table.meta.emplace_back(trim(line.substr(1, eq - 1)), trim(line.substr(eq + 1)));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(trim(cell));
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size())
            throw std::runtime_error("read_csv: malformed row in " + path.string());
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_json(const std::filesystem::path& path, const DataTable& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) meta[key] = value;
    j["meta"] = std::move(meta);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    std::ofstream out = open_out(path);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

DataTable read_json(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    nlohmann::ordered_json j;
    in >> j;
    DataTable table;
    for (const auto& [key, value] : j.at("meta").items())
        table.meta.emplace_back(key, value.get<std::string>());
    table.columns = j.at("columns").get<std::vector<std::string>>();
    table.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    return table;
}

void write_table(const std::filesystem::path& path, const DataTable& table,
                 const std::string& format) {
    if (format == "csv")
        write_csv(path, table);
    else if (format == "json")
        write_json(path, table);
    else
        throw std::invalid_argument("write_table: unknown format '" + format + "'");
}

DataTable read_table(const std::filesystem::path& path, const std::string& format) {
    if (format == "csv") return read_csv(path);
    if (format == "json") return read_json(path);
    throw std::invalid_argument("read_table: unknown format '" + format + "'");
}

}  // namespace qrm2
