#pragma once

// CSV / JSON records for the command line tool. Column order per kind is fixed:
//
//   eigenvalue           state, eta, nodes
//   wavefunction-sample  state, r, u
//   report-row           report, inputs, expected, computed, rel_error, tolerance, check, status, note
//
// Numbers are written with 12 significant digits; JSON carries the same rounded values.

#include "qdot/radial_model.hpp"
#include "qdot/validation.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qdot::output {

enum class RecordKind { Eigenvalue, WavefunctionSample, ReportRow };

std::string_view to_string(RecordKind kind);
std::span<const std::string_view> columns(RecordKind kind);

using Cell = std::variant<double, std::int64_t, std::string>;

struct OutputRecord {
    RecordKind kind = RecordKind::Eigenvalue;
    std::vector<Cell> values; ///< one per column, in columns(kind) order
};

/// Records of one kind with "#"-prefixed metadata for CSV.
struct Table {
    RecordKind kind = RecordKind::Eigenvalue;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<OutputRecord> records;

    void add(OutputRecord record);
};

/// %.12g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, std::span<const Table> tables);

std::vector<OutputRecord> eigenvalue_records(std::span<const NumericalEigenstate> states);
/// Every stride-th grid point of each state's wave function.
std::vector<OutputRecord> wavefunction_records(std::span<const NumericalEigenstate> states, std::size_t stride);
std::vector<OutputRecord> report_records(const validation::ComparisonReport& report);

} // namespace qdot::output
