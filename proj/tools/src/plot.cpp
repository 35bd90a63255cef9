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

#include "detumble/cli/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

namespace detumble::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 84.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;
constexpr double kPlotWidth = kWidth - kLeft - kRight;
constexpr double kPlotHeight = kHeight - kTop - kBottom;

constexpr std::array<const char*, 3> kColors{"#1f77b4", "#d62728", "#2ca02c"};

struct SeriesSpec {
    std::string column;
    std::string label;
    double scale = 1.0;
};

struct PlotSpec {
    std::string title;
    std::string y_label;
    std::vector<SeriesSpec> series;
    bool log_y = false;
};

PlotSpec spec_for(PlotKind kind) {
    constexpr double kRadToDeg = 180.0 / std::numbers::pi;
    switch (kind) {
        case PlotKind::rates:
            return {"Angular rates", "rate [deg/s]",
                    {{"wx", "wx", kRadToDeg}, {"wy", "wy", kRadToDeg}, {"wz", "wz", kRadToDeg}}};
        case PlotKind::inputs:
            return {"Controller inputs", "dipole [A m^2]", {{"mx", "mx"}, {"v", "v (dummy)"}}};
        case PlotKind::residual:
            return {"Optimality residual", "|F|", {{"f_norm", "|F|"}}, true};
        case PlotKind::lyapunov:
            return {"Rotational kinetic energy", "V [J]", {{"lyap", "V"}}};
    }
    return {};
}

std::string fmt(const char* pattern, double value) {
    std::array<char, 48> buffer{};
    std::snprintf(buffer.data(), buffer.size(), pattern, value);
    return buffer.data();
}

// Heckbert's nice-number tick spacing.
double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double fraction = raw / magnitude;
    double nice = 10.0;
    if (fraction <= 1.0) nice = 1.0;
    else if (fraction <= 2.0) nice = 2.0;
    else if (fraction <= 5.0) nice = 5.0;
    return nice * magnitude;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> ticks;
};

Axis linear_axis(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        lo -= pad;
        hi += pad;
    }
    const double step = nice_step(hi - lo, 6);
    Axis axis{std::floor(lo / step) * step, std::ceil(hi / step) * step, {}};
    for (double tick = axis.lo; tick <= axis.hi + 0.5 * step; tick += step) {
        axis.ticks.push_back(std::abs(tick) < 1e-12 * step ? 0.0 : tick);
    }
    return axis;
}

Axis log_axis(double lo, double hi) {
    Axis axis{std::floor(std::log10(lo)), std::ceil(std::log10(hi)), {}};
    if (axis.hi <= axis.lo) axis.hi = axis.lo + 1.0;
    const int decades = static_cast<int>(axis.hi - axis.lo);
    const int stride = std::max(1, (decades + 7) / 8);
    for (int d = 0; d <= decades; d += stride) {
        axis.ticks.push_back(axis.lo + d);
    }
    return axis;
}

struct Point {
    double x;
    double y;
};

// Keeps the first/last sample and each pixel column's extremes in time order.
std::vector<Point> decimate(const std::vector<Point>& points, double t_lo, double t_hi) {
    const auto columns = static_cast<std::size_t>(kPlotWidth);
    if (points.size() <= 2 * columns) {
        return points;
    }
    std::vector<Point> out;
    out.reserve(2 * columns + 2);
    std::size_t i = 0;
    while (i < points.size()) {
        const auto bucket = static_cast<std::size_t>(
            std::min<double>(columns - 1, (points[i].x - t_lo) / (t_hi - t_lo) * columns));
        std::size_t lo_idx = i;
        std::size_t hi_idx = i;
        std::size_t j = i;
        for (; j < points.size(); ++j) {
            const auto b = static_cast<std::size_t>(
                std::min<double>(columns - 1, (points[j].x - t_lo) / (t_hi - t_lo) * columns));
            if (b != bucket) break;
            if (points[j].y < points[lo_idx].y) lo_idx = j;
            if (points[j].y > points[hi_idx].y) hi_idx = j;
        }
        out.push_back(points[std::min(lo_idx, hi_idx)]);
        if (lo_idx != hi_idx) out.push_back(points[std::max(lo_idx, hi_idx)]);
        i = j;
    }
    return out;
}

}  // namespace

std::optional<PlotKind> parse_plot_kind(std::string_view name) {
    if (name == "rates") return PlotKind::rates;
    if (name == "inputs") return PlotKind::inputs;
    if (name == "residual") return PlotKind::residual;
    if (name == "lyapunov") return PlotKind::lyapunov;
    return std::nullopt;
}

std::vector<std::string> required_columns(PlotKind kind) {
    std::vector<std::string> columns{"t"};
    for (const auto& series : spec_for(kind).series) {
        columns.push_back(series.column);
    }
    return columns;
}

std::string render_plot(const TraceTable& trace, PlotKind kind) {
    if (trace.rows.empty()) {
        throw PlotError("trace has no records");
    }
    const PlotSpec spec = spec_for(kind);

    const auto column_of = [&](const std::string& name) {
        const auto idx = trace.find(name);
        if (!idx) {
            throw PlotError("trace is missing column '" + name + "'");
        }
        return *idx;
    };
    const std::size_t t_col = column_of("t");

    std::vector<std::vector<Point>> series;
    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = -t_lo;
    double y_lo = t_lo;
    double y_hi = -t_lo;
    for (const auto& s : spec.series) {
        const std::size_t col = column_of(s.column);
        std::vector<Point> points;
        for (const auto& row : trace.rows) {
            if (!row[t_col] || !row[col]) continue;
            const double y = *row[col] * s.scale;
            if (!std::isfinite(y) || (spec.log_y && !(y > 0.0))) continue;
            points.push_back({*row[t_col], spec.log_y ? std::log10(y) : y});
        }
        if (points.empty()) {
            throw PlotError("column '" + s.column + "' has no plottable values");
        }
        for (const auto& p : points) {
            t_lo = std::min(t_lo, p.x);
            t_hi = std::max(t_hi, p.x);
            y_lo = std::min(y_lo, p.y);
            y_hi = std::max(y_hi, p.y);
        }
        series.push_back(std::move(points));
    }

    const Axis x_axis = linear_axis(t_lo, t_hi);
    const Axis y_axis = spec.log_y ? log_axis(std::pow(10.0, y_lo), std::pow(10.0, y_hi))
                                   : linear_axis(y_lo, y_hi);
    const auto px = [&](double x) { return kLeft + (x - x_axis.lo) / (x_axis.hi - x_axis.lo) * kPlotWidth; };
    const auto py = [&](double y) {
        return kTop + kPlotHeight - (y - y_axis.lo) / (y_axis.hi - y_axis.lo) * kPlotHeight;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" "
           "viewBox=\"0 0 800 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + spec.title + "</text>\n";

    for (const double tick : x_axis.ticks) {
        const std::string x = fmt("%.2f", px(tick));
        svg += "<line x1=\"" + x + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + x + "\" y2=\"" +
               fmt("%.2f", kTop + kPlotHeight) + "\" stroke=\"#e0e0e0\"/>\n";
        svg += "<text x=\"" + x + "\" y=\"" + fmt("%.2f", kTop + kPlotHeight + 18.0) +
               "\" text-anchor=\"middle\">" + fmt("%g", tick) + "</text>\n";
    }
    for (const double tick : y_axis.ticks) {
        const std::string y = fmt("%.2f", py(tick));
        svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + y + "\" x2=\"" +
               fmt("%.2f", kLeft + kPlotWidth) + "\" y2=\"" + y + "\" stroke=\"#e0e0e0\"/>\n";
        const std::string label = spec.log_y ? "1e" + fmt("%g", tick) : fmt("%g", tick);
        svg += "<text x=\"" + fmt("%.2f", kLeft - 6.0) + "\" y=\"" + fmt("%.2f", py(tick) + 4.0) +
               "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
           fmt("%.2f", kPlotWidth) + "\" height=\"" + fmt("%.2f", kPlotHeight) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft + 0.5 * kPlotWidth) + "\" y=\"" + fmt("%.2f", kHeight - 12.0) +
           "\" text-anchor=\"middle\">time [s]</text>\n";
    svg += "<text transform=\"translate(18," + fmt("%.2f", kTop + 0.5 * kPlotHeight) +
           ") rotate(-90)\" text-anchor=\"middle\">" + spec.y_label + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto points = decimate(series[s], t_lo, t_hi);
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[s % kColors.size()]) +
               "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0) svg += ' ';
            svg += fmt("%.2f", px(points[i].x)) + "," + fmt("%.2f", py(points[i].y));
        }
        svg += "\"/>\n";
        const double legend_y = kTop + 16.0 + 16.0 * static_cast<double>(s);
        const double legend_x = kLeft + kPlotWidth - 110.0;
        svg += "<line x1=\"" + fmt("%.2f", legend_x) + "\" y1=\"" + fmt("%.2f", legend_y - 4.0) +
               "\" x2=\"" + fmt("%.2f", legend_x + 20.0) + "\" y2=\"" + fmt("%.2f", legend_y - 4.0) +
               "\" stroke=\"" + kColors[s % kColors.size()] + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", legend_x + 26.0) + "\" y=\"" + fmt("%.2f", legend_y) + "\">" +
               spec.series[s].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void plot_trace_file(const std::filesystem::path& trace_path, PlotKind kind,
                     const std::filesystem::path& svg_path) {
    std::ifstream in(trace_path);
    if (!in) {
        throw PlotError(trace_path.string() + ": cannot open trace");
    }
    TraceTable table;
    try {
        table = read_trace(in);
    } catch (const std::runtime_error& err) {
        throw PlotError(trace_path.string() + ": " + err.what());
    }
    const std::string svg = render_plot(table, kind);
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) {
        throw PlotError(svg_path.string() + ": cannot write plot");
    }
    out << svg;
}

}  // namespace detumble::cli
