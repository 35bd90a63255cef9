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

#ifndef DETUMBLE_CLI_PLOT_HPP
#define DETUMBLE_CLI_PLOT_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "detumble/cli/trace.hpp"

namespace detumble::cli {

enum class PlotKind { rates, inputs, residual, lyapunov };

std::optional<PlotKind> parse_plot_kind(std::string_view name);

class PlotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trace columns a plot kind draws.
std::vector<std::string> required_columns(PlotKind kind);

/// Renders a fixed-size SVG. Rates are drawn in deg/s, the residual on a
/// log10 axis. Long traces are reduced to per-pixel min/max pairs. Throws
/// PlotError for an empty trace or a missing or all-empty column.
std::string render_plot(const TraceTable& trace, PlotKind kind);

/// Reads `trace_path` and writes the SVG to `svg_path`. Nothing is written
/// when rendering fails.
void plot_trace_file(const std::filesystem::path& trace_path, PlotKind kind,
                     const std::filesystem::path& svg_path);

}  // namespace detumble::cli

#endif  // DETUMBLE_CLI_PLOT_HPP
