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

#include "detumble/cli/commands.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <set>

#include "detumble/cli/config.hpp"
#include "detumble/cli/plot.hpp"
#include "detumble/cli/trace.hpp"

namespace detumble::cli {
namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr std::array<const char*, 3> kAxes{"wx", "wy", "wz"};

std::string hex64(std::uint64_t value) {
    std::array<char, 17> buffer{};
    std::snprintf(buffer.data(), buffer.size(), "%016llx", static_cast<unsigned long long>(value));
    return buffer.data();
}

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

struct RunOutcome {
    ScenarioResult result;
    std::string error;  // controller start-up failure
};

RunOutcome run_guarded(const ScenarioConfig& cfg) {
    RunOutcome outcome;
    try {
        outcome.result = run_scenario(cfg);
    } catch (const std::exception& err) {
        outcome.error = err.what();
    }
    return outcome;
}

// Writes trace.csv and metrics.json into `dir`. Returns false on I/O failure.
bool write_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                   const ScenarioResult& result, std::ostream& log) {
    std::ofstream trace(dir / "trace.csv", std::ios::binary);
    std::ofstream metrics(dir / "metrics.json", std::ios::binary);
    if (!trace || !metrics) {
        log << "error: cannot write outputs in " << dir.string() << "\n";
        return false;
    }
    write_trace(trace, result.records);
    metrics << metrics_json(cfg, result).dump(2) << '\n';
    trace.flush();
    metrics.flush();
    if (!trace || !metrics) {
        log << "error: write failed in " << dir.string() << "\n";
        return false;
    }
    return true;
}

bool prepare_directory(const std::filesystem::path& dir, std::ostream& log) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        log << "error: cannot create " << dir.string() << ": " << ec.message() << "\n";
        return false;
    }
    // Probe writability before spending time on the simulation.
    const auto probe = dir / "trace.csv";
    std::ofstream out(probe, std::ios::binary | std::ios::app);
    if (!out) {
        log << "error: cannot write " << probe.string() << "\n";
        return false;
    }
    return true;
}

std::string format_cell(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

}  // namespace

nlohmann::json metrics_json(const ScenarioConfig& cfg, const ScenarioResult& result) {
    const DetumbleMetrics& m = result.metrics;
    json doc;
    doc["controller"] = std::string(to_string(cfg.controller));
    doc["config_hash"] = "fnv1a64:" + hex64(config_hash(cfg));
    doc["records"] = result.records.size();
    doc["aborted"] = result.aborted;
    doc["abort_index"] = result.abort_index ? json(*result.abort_index) : json(nullptr);
    doc["message"] = result.message;
    doc["settle_threshold_deg_s"] = cfg.settle_threshold_deg_s;
    json settle = json::object();
    for (std::size_t i = 0; i < kAxes.size(); ++i) {
        settle[kAxes[i]] = optional_number(m.settle_time[i]);
    }
    doc["settle_time_s"] = settle;
    doc["final_rates_rad_s"] = {m.final_rates.x(), m.final_rates.y(), m.final_rates.z()};
    doc["max_f_norm"] = optional_number(m.max_f_norm);
    doc["min_v"] = optional_number(m.min_v);
    if (cfg.controller == ControllerKind::mpc) {
        doc["solver"] = {{"max_gmres_iterations", result.solver.max_gmres_iterations},
                         {"mean_gmres_iterations", result.solver.mean_gmres_iterations},
                         {"gmres_breakdowns", result.solver.gmres_breakdowns},
                         {"clamped_steps", result.solver.clamped_steps}};
    } else {
        doc["solver"] = nullptr;
    }
    return doc;
}

std::string comparison_table(const std::vector<std::string>& names,
                             const std::vector<ScenarioResult>& results) {
    std::string table = "metric";
    for (const auto& name : names) table += "," + name;
    table += '\n';

    const auto row = [&](const std::string& metric, auto&& cell) {
        table += metric;
        for (const auto& result : results) table += "," + cell(result);
        table += '\n';
    };
    for (std::size_t i = 0; i < kAxes.size(); ++i) {
        row(std::string("settle_") + kAxes[i] + "_s", [&](const ScenarioResult& r) {
            const auto& settle = r.metrics.settle_time[i];
            return settle ? format_double(*settle) : std::string("unsettled");
        });
    }
    for (int i = 0; i < 3; ++i) {
        row(std::string("final_") + kAxes[static_cast<std::size_t>(i)] + "_deg_s",
            [&](const ScenarioResult& r) { return format_double(r.metrics.final_rates[i] * kRadToDeg); });
    }
    row("max_f_norm", [](const ScenarioResult& r) { return format_cell(r.metrics.max_f_norm); });
    row("min_v", [](const ScenarioResult& r) { return format_cell(r.metrics.min_v); });
    row("aborted", [](const ScenarioResult& r) { return std::string(r.aborted ? "1" : "0"); });
    return table;
}

int cmd_run(const Invocation& invocation, std::ostream& log) {
    ScenarioConfig cfg;
    try {
        cfg = load_config(invocation.config, invocation.overrides);
    } catch (const ConfigError& err) {
        log << "error: " << err.what() << "\n";
        return kExitUsage;
    }
    if (!prepare_directory(invocation.out, log)) {
        return kExitUsage;
    }

    const RunOutcome outcome = run_guarded(cfg);
    if (!write_outputs(invocation.out, cfg, outcome.result, log)) {
        return kExitUsage;
    }
    if (!outcome.error.empty()) {
        log << "error: controller failed: " << outcome.error << "\n";
        return kExitAbort;
    }
    if (outcome.result.aborted) {
        log << "error: simulation aborted: " << outcome.result.message << "\n";
        return kExitAbort;
    }
    return kExitOk;
}

int cmd_compare(const Invocation& invocation, std::ostream& out, std::ostream& log) {
    if (invocation.controllers.size() != 2) {
        log << "error: compare expects exactly two controllers\n";
        return kExitUsage;
    }
    std::set<std::string> distinct;
    for (const auto& name : invocation.controllers) {
        if (!parse_controller(name)) {
            log << "error: unknown controller '" << name << "'\n";
            return kExitUsage;
        }
        distinct.insert(name);
    }
    if (distinct.size() != invocation.controllers.size()) {
        log << "error: compare needs two different controllers\n";
        return kExitUsage;
    }

    ScenarioConfig base;
    try {
        base = load_config(invocation.config, invocation.overrides);
    } catch (const ConfigError& err) {
        log << "error: " << err.what() << "\n";
        return kExitUsage;
    }

    std::vector<ScenarioConfig> configs;
    for (const auto& name : invocation.controllers) {
        ScenarioConfig cfg = base;
        cfg.controller = *parse_controller(name);
        configs.push_back(cfg);
        if (!prepare_directory(invocation.out / name, log)) {
            return kExitUsage;
        }
    }

    std::vector<std::future<RunOutcome>> pending;
    for (const auto& cfg : configs) {
        pending.push_back(std::async(std::launch::async, run_guarded, cfg));
    }

    int status = kExitOk;
    std::vector<ScenarioResult> results;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        RunOutcome outcome = pending[i].get();
        const auto& name = invocation.controllers[i];
        if (!write_outputs(invocation.out / name, configs[i], outcome.result, log)) {
            return kExitUsage;
        }
        if (!outcome.error.empty()) {
            log << "error: " << name << " controller failed: " << outcome.error << "\n";
            status = kExitAbort;
        } else if (outcome.result.aborted) {
            log << "error: " << name << " aborted: " << outcome.result.message << "\n";
            status = kExitAbort;
        }
        results.push_back(std::move(outcome.result));
    }

    const std::string table = comparison_table(invocation.controllers, results);
    std::ofstream file(invocation.out / "comparison.csv", std::ios::binary);
    if (!file || !(file << table)) {
        log << "error: cannot write " << (invocation.out / "comparison.csv").string() << "\n";
        return kExitUsage;
    }
    out << table;
    return status;
}

int cmd_plot(const std::filesystem::path& trace, const std::string& kind,
             const std::filesystem::path& svg, std::ostream& log) {
    const auto plot_kind = parse_plot_kind(kind);
    if (!plot_kind) {
        log << "error: unknown plot kind '" << kind << "' (rates, inputs, residual, lyapunov)\n";
        return kExitUsage;
    }
    try {
        plot_trace_file(trace, *plot_kind, svg);
    } catch (const PlotError& err) {
        log << "error: " << err.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace detumble::cli
