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

#ifndef DETUMBLE_CLI_TRACE_HPP
#define DETUMBLE_CLI_TRACE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detumble/simulation.hpp"

namespace detumble::cli {

inline constexpr std::string_view kTraceHeader =
    "t,wx,wy,wz,q0,q1,q2,q3,bx,by,bz,mx,v,rho0,f_norm,lyap,cond,clamped";

/// Shortest round-trip scientific form, e.g. "1.0000000000000001e-01".
std::string format_double(double value);

/// One CSV line (no terminator). MPC-only fields are empty when unset.
std::string format_record(const SimulationRecord& record);

void write_trace(std::ostream& out, std::span<const SimulationRecord> records);

/// Column-oriented view of a trace file. Empty fields read as nullopt.
struct TraceTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    /// Column index, or nullopt if the header lacks it.
    std::optional<std::size_t> find(std::string_view name) const;
};

/// Throws std::runtime_error on malformed input (ragged rows, bad numbers).
TraceTable read_trace(std::istream& in);

}  // namespace detumble::cli

#endif  // DETUMBLE_CLI_TRACE_HPP
