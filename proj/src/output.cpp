#include "qdot/output.hpp"

#include "qdot/errors.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>

namespace qdot::output {

namespace {

constexpr std::array<std::string_view, 3> eigenvalue_columns{"state", "eta", "nodes"};
constexpr std::array<std::string_view, 3> sample_columns{"state", "r", "u"};
constexpr std::array<std::string_view, 9> report_columns{"report",    "inputs", "expected", "computed", "rel_error",
                                                         "tolerance", "check",  "status",   "note"};

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        return format_number(*d);
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(cell);
}

nlohmann::json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) {
            return nullptr;
        }
        return std::stod(format_number(*d));
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return *i;
    }
    return std::get<std::string>(cell);
}

} // namespace

std::string_view to_string(RecordKind kind) {
    switch (kind) {
    case RecordKind::Eigenvalue:
        return "eigenvalue";
    case RecordKind::WavefunctionSample:
        return "wavefunction-sample";
    case RecordKind::ReportRow:
        return "report-row";
    }
    return "?";
}

std::span<const std::string_view> columns(RecordKind kind) {
    switch (kind) {
    case RecordKind::Eigenvalue:
        return eigenvalue_columns;
    case RecordKind::WavefunctionSample:
        return sample_columns;
    case RecordKind::ReportRow:
        return report_columns;
    }
    return {};
}

void Table::add(OutputRecord record) {
    if (record.kind != kind || record.values.size() != columns(kind).size()) {
        throw ArgumentError(fmt::format("record does not fit a {} table", to_string(kind)));
    }
    records.push_back(std::move(record));
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.12g}", v);
}

void write_csv(std::ostream& out, const Table& table) {
    out << "# kind: " << to_string(table.kind) << '\n';
    for (const auto& [key, value] : table.metadata) {
        out << "# " << key << ": " << value << '\n';
    }
    const auto cols = columns(table.kind);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const auto& record : table.records) {
        for (std::size_t i = 0; i < record.values.size(); ++i) {
            out << (i ? "," : "") << csv_field(cell_text(record.values[i]));
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, std::span<const Table> tables) {
    auto doc = nlohmann::json::array();
    for (const auto& table : tables) {
        nlohmann::json t;
        t["kind"] = to_string(table.kind);
        t["metadata"] = nlohmann::json::object();
        for (const auto& [key, value] : table.metadata) {
            t["metadata"][key] = value;
        }
        const auto cols = columns(table.kind);
        t["columns"] = nlohmann::json::array();
        for (auto c : cols) {
            t["columns"].push_back(c);
        }
        t["records"] = nlohmann::json::array();
        for (const auto& record : table.records) {
            auto row = nlohmann::json::object();
            for (std::size_t i = 0; i < cols.size(); ++i) {
                row[std::string(cols[i])] = cell_json(record.values[i]);
            }
            t["records"].push_back(std::move(row));
        }
        doc.push_back(std::move(t));
    }
    out << doc.dump(2) << '\n';
}

std::vector<OutputRecord> eigenvalue_records(std::span<const NumericalEigenstate> states) {
    std::vector<OutputRecord> records;
    for (std::size_t k = 0; k < states.size(); ++k) {
        records.push_back({RecordKind::Eigenvalue,
                           {static_cast<std::int64_t>(k), states[k].eta, static_cast<std::int64_t>(states[k].nodes)}});
    }
    return records;
}

std::vector<OutputRecord> wavefunction_records(std::span<const NumericalEigenstate> states, std::size_t stride) {
    if (stride == 0) {
        throw ArgumentError("stride must be >= 1");
    }
    std::vector<OutputRecord> records;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& w = states[k].wave;
        for (std::size_t i = 0; i < w.grid.size(); i += stride) {
            records.push_back({RecordKind::WavefunctionSample, {static_cast<std::int64_t>(k), w.grid[i], w.values[i]}});
        }
    }
    return records;
}

std::vector<OutputRecord> report_records(const validation::ComparisonReport& report) {
    std::vector<OutputRecord> records;
    for (const auto& row : report.rows) {
        records.push_back({RecordKind::ReportRow,
                           {report.label, row.inputs, row.expected, row.computed, row.rel_error, row.tolerance,
                            std::string(validation::to_string(row.check)),
                            std::string(validation::to_string(row.status)), row.note}});
    }
    return records;
}

} // namespace qdot::output
