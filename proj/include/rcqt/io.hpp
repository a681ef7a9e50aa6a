// io.hpp — deterministic, locale-independent numeric formatting and
// CSV/JSON table output for sweep results.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rcqt {

// Shortest round-trip representation (via std::to_chars); locale-free.
std::string format_double(double v);

// A sweep result table: numeric cells (possibly absent, e.g. efficiency
// outside the engine window) plus a per-row status note ("ok" or an error).
struct SweepTable {
    std::vector<std::string> columns;
    struct Row {
        std::vector<std::optional<double>> values;
        std::string status{"ok"};
    };
    std::vector<Row> rows;

    void add_row(std::vector<std::optional<double>> values, std::string status = "ok");
    bool any_failed() const;
};

// CSV: header row, ',' separator, '.' decimal, empty cell for absent values,
// trailing "status" column.
void write_csv(std::ostream& os, const SweepTable& table);
void write_csv_file(const std::string& path, const SweepTable& table);

// JSON: {"columns": [...], "rows": [[...]], "status": [...]} with null for
// absent values.
std::string to_json(const SweepTable& table);
void write_json_file(const std::string& path, const SweepTable& table);

} // namespace rcqt
