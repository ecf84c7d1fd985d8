#include "phyllo/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "phyllo/error.hpp"

namespace phyllo {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string CsvTable::to_string() const {
    std::string out = "# " + schema + "\n";
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + columns[k];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_number(row[k]);
        }
        out += "\n";
    }
    return out;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
        if (columns[k] == name) return k;
    throw IoError("column '" + name + "' not found in table " + schema);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(bytes.data(), std::streamsize(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw IoError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp + " to " + path.string() + ": " + ec.message());
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_file_atomic(path, table.to_string()); }

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool first_comment = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            if (first_comment)
                t.schema = body;
            else
                t.comments.push_back(body);
            first_comment = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (t.columns.empty()) {
            t.columns = cells;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw IoError(path.string() + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(t.columns.size()));
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (end == c.c_str() || *end != '\0') throw IoError(path.string() + ": bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw IoError(path.string() + ": missing header row");
    return t;
}

}  // namespace phyllo
