// io.cpp

#include "rcqt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rcqt/errors.hpp"

namespace rcqt {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void SweepTable::add_row(std::vector<std::optional<double>> values, std::string status) {
    rows.push_back(Row{std::move(values), std::move(status)});
}

bool SweepTable::any_failed() const {
    for (const auto& r : rows)
        if (r.status != "ok") return true;
    return false;
}

void write_csv(std::ostream& os, const SweepTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ',';
        os << table.columns[c];
    }
    os << ",status\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.values.size(); ++c) {
            if (c) os << ',';
            if (row.values[c]) os << format_double(*row.values[c]);
        }
        std::string status = row.status;
        for (auto& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        os << ',' << status << '\n';
    }
}

void write_csv_file(const std::string& path, const SweepTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_csv(os, table);
    if (!os) throw IoError("write failed: " + path);
}

std::string to_json(const SweepTable& table) {
    nlohmann::ordered_json j;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    auto status = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& v : row.values) {
            if (v && std::isfinite(*v))
                r.push_back(*v);
            else
                r.push_back(nullptr);
        }
        rows.push_back(std::move(r));
        status.push_back(row.status);
    }
    j["rows"] = std::move(rows);
    j["status"] = std::move(status);
    return j.dump(2) + "\n";
}

void write_json_file(const std::string& path, const SweepTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << to_json(table);
    if (!os) throw IoError("write failed: " + path);
}

} // namespace rcqt
