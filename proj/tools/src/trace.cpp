/*
 Copyright 2026 The detumble Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "detumble/cli/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace detumble::cli {
namespace {

void append(std::string& line, double value) {
    line += format_double(value);
    line += ',';
}

void append(std::string& line, const std::optional<double>& value) {
    if (value) {
        line += format_double(*value);
    }
    line += ',';
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto result =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::scientific);
    return {buffer.data(), result.ptr};
}

std::string format_record(const SimulationRecord& record) {
    std::string line;
    line.reserve(320);
    append(line, record.t);
    for (int i = 0; i < 3; ++i) append(line, record.omega[i]);
    for (int i = 0; i < 4; ++i) append(line, record.attitude.coeffs()[i]);
    for (int i = 0; i < 3; ++i) append(line, record.field_body[i]);
    append(line, record.mx);
    append(line, record.v);
    append(line, record.rho0);
    append(line, record.f_norm);
    append(line, record.lyapunov);
    if (record.condition) line += std::to_string(*record.condition);
    line += ',';
    if (record.clamped) line += *record.clamped ? '1' : '0';
    return line;
}

void write_trace(std::ostream& out, std::span<const SimulationRecord> records) {
    out << kTraceHeader << '\n';
    for (const auto& record : records) {
        out << format_record(record) << '\n';
    }
}

std::optional<std::size_t> TraceTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return std::nullopt;
}

TraceTable read_trace(std::istream& in) {
    TraceTable table;
    std::string line;
    if (!std::getline(in, line)) {
        return table;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (const auto field : split(line)) {
        table.columns.emplace_back(field);
    }

    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != table.columns.size()) {
            throw std::runtime_error("trace line " + std::to_string(line_number) + ": expected " +
                                     std::to_string(table.columns.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        std::vector<std::optional<double>> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                row.emplace_back();
                continue;
            }
            double value = 0.0;
            const auto* end = fields[i].data() + fields[i].size();
            const auto [ptr, ec] = std::from_chars(fields[i].data(), end, value);
            if (ec != std::errc() || ptr != end) {
                throw std::runtime_error("trace line " + std::to_string(line_number) + ", column " +
                                         table.columns[i] + ": not a number");
            }
            row.emplace_back(value);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace detumble::cli
