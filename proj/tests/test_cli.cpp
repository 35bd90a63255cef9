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

#include <algorithm>
#include <bit>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "detumble/cli/commands.hpp"
#include "detumble/cli/config.hpp"
#include "detumble/cli/plot.hpp"
#include "detumble/cli/trace.hpp"

namespace detumble::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kBaseline = fs::path(DETUMBLE_SOURCE_DIR) / "configs" / "qli-baseline.json";

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("detumble-test-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const nlohmann::json& doc) {
    try {
        from_json(doc);
    } catch (const ConfigError& err) {
        return err.what();
    }
    return {};
}

// --- config -------------------------------------------------------------------

TEST(Config, BaselineFileMatchesDefaults) {
    const ScenarioConfig cfg = load_config(kBaseline);
    const ScenarioConfig defaults;
    EXPECT_EQ(cfg.inertia.jx, 0.0045870);
    EXPECT_EQ(cfg.inertia.jy, 0.031420);
    EXPECT_EQ(cfg.inertia.jz, 0.031249);
    EXPECT_EQ(cfg.orbit.mean_anomaly_epoch, 240.49);
    EXPECT_EQ(cfg.initial_rates, Vec3(0.1, 0.1, 0.1));
    EXPECT_EQ(cfg.controller, ControllerKind::mpc);
    EXPECT_EQ(cfg.horizon.length, 10.0);
    EXPECT_EQ(cfg.horizon.steps, 10);
    EXPECT_EQ(cfg.continuation.gmres_max_iters, 30);
    EXPECT_EQ(cfg.continuation.sampling_period, 0.1);
    EXPECT_EQ(config_hash(cfg), config_hash(defaults));
}

TEST(Config, EmptyDocumentGivesDefaults) {
    EXPECT_EQ(to_json(from_json(nlohmann::json::object())), to_json(ScenarioConfig{}));
}

TEST(Config, RoundTrip) {
    ScenarioConfig cfg;
    cfg.controller = ControllerKind::bdot_full;
    cfg.bdot_rate_source = BdotRateSource::exact;
    cfg.field.mode = DipoleMode::aligned;
    cfg.weights.r1 = 0.5;
    const ScenarioConfig back = from_json(to_json(cfg));
    EXPECT_EQ(to_json(back), to_json(cfg));
    EXPECT_EQ(config_hash(back), config_hash(cfg));
}

TEST(Config, OverrideChangesOneValue) {
    const ScenarioConfig cfg = load_config(kBaseline, {"mpc.zeta=20"});
    EXPECT_EQ(cfg.continuation.zeta, 20.0);
    EXPECT_EQ(cfg.horizon.length, 10.0);
    EXPECT_NE(config_hash(cfg), config_hash(load_config(kBaseline)));

    const ScenarioConfig named = load_config(kBaseline, {"controller=bdot-x"});
    EXPECT_EQ(named.controller, ControllerKind::bdot_x);
}

TEST(Config, StepsDriveGmresBudget) {
    const ScenarioConfig cfg = from_json({{"mpc", {{"steps", 5}}}});
    EXPECT_EQ(cfg.horizon.steps, 5);
    EXPECT_EQ(cfg.continuation.gmres_max_iters, 15);
    const ScenarioConfig pinned = from_json({{"mpc", {{"steps", 5}, {"gmres_max_iters", 7}}}});
    EXPECT_EQ(pinned.continuation.gmres_max_iters, 7);
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_NE(config_error({{"inertia", {{"jx", -1.0}}}}).find("inertia.jx"), std::string::npos);
    EXPECT_NE(config_error({{"mpc", {{"foo", 1}}}}).find("mpc.foo"), std::string::npos);
    EXPECT_NE(config_error({{"initial", {{"omega", {1.0, 2.0}}}}}).find("initial.omega"), std::string::npos);
    EXPECT_NE(config_error({{"duration", "long"}}).find("duration"), std::string::npos);
    EXPECT_NE(config_error({{"controller", "pid"}}).find("controller"), std::string::npos);
    EXPECT_FALSE(config_error({{"weights", {{"r2", 0.0}}}}).empty());
}

TEST(Config, UnknownOverrideKeyAndMalformedFile) {
    EXPECT_THROW(load_config(kBaseline, {"mpc.foo=1"}), ConfigError);
    EXPECT_THROW(load_config(kBaseline, {"novalue"}), ConfigError);
    TempDir dir;
    const fs::path bad = dir.path() / "bad.json";
    std::ofstream(bad) << "{ \"duration\": ";
    EXPECT_THROW(load_config(bad), ConfigError);
    EXPECT_THROW(load_config(dir.path() / "missing.json"), ConfigError);
}

// --- trace ---------------------------------------------------------------------

TEST(Trace, HeaderIsStable) {
    std::ostringstream out;
    write_trace(out, {});
    EXPECT_EQ(out.str(), "t,wx,wy,wz,q0,q1,q2,q3,bx,by,bz,mx,v,rho0,f_norm,lyap,cond,clamped\n");
}

TEST(Trace, FormatDoubleRoundTrips) {
    std::mt19937_64 rng(127);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 10000; ++i) {
        const double x = std::bit_cast<double>(bits(rng));
        if (!std::isfinite(x)) continue;
        const std::string s = format_double(x);
        double back = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        ASSERT_EQ(res.ec, std::errc());
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(x)) << s;
    }
    EXPECT_EQ(format_double(0.1 * 3), "3.0000000000000004e-01");
}

TEST(Trace, BdotRowsLeaveMpcFieldsEmpty) {
    SimulationRecord r;
    r.t = 0.5;
    r.mx = -10.0;
    const std::string row = format_record(r);
    std::vector<std::string> fields;
    std::stringstream ss(row);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (!row.empty() && row.back() == ',') fields.emplace_back();
    ASSERT_EQ(fields.size(), 18u);
    for (const std::size_t empty : {12u, 13u, 14u, 16u, 17u}) EXPECT_EQ(fields[empty], "") << empty;
    EXPECT_EQ(fields[11], "-1e+01");
    EXPECT_FALSE(fields[15].empty());
}

TEST(Trace, WriteReadRoundTrip) {
    ScenarioConfig cfg;
    cfg.duration = 1.0;
    const ScenarioResult result = run_scenario(cfg);
    std::stringstream io;
    write_trace(io, result.records);
    const TraceTable table = read_trace(io);
    ASSERT_EQ(table.rows.size(), result.records.size());
    const auto mx = table.find("mx");
    const auto cond = table.find("cond");
    ASSERT_TRUE(mx && cond);
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        EXPECT_EQ(table.rows[k][*mx], result.records[k].mx);
        EXPECT_EQ(table.rows[k][*cond], static_cast<double>(*result.records[k].condition));
    }
}

TEST(Trace, RejectsRaggedInput) {
    std::istringstream ragged("t,wx\n0,1\n0\n");
    EXPECT_THROW(read_trace(ragged), std::runtime_error);
    std::istringstream junk("t,wx\n0,abc\n");
    EXPECT_THROW(read_trace(junk), std::runtime_error);
}

// --- commands --------------------------------------------------------------------

TEST(Commands, RunWritesTraceAndMetrics) {
    TempDir dir;
    std::ostringstream log;
    const int code = cmd_run({kBaseline, dir.path() / "run", {"duration=0.1"}}, log);
    ASSERT_EQ(code, kExitOk) << log.str();
    const std::string trace = slurp(dir.path() / "run" / "trace.csv");
    EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 3);
    const auto metrics = nlohmann::json::parse(slurp(dir.path() / "run" / "metrics.json"));
    EXPECT_EQ(metrics["controller"], "mpc");
    EXPECT_EQ(metrics["records"], 2);
    EXPECT_TRUE(metrics["config_hash"].get<std::string>().starts_with("fnv1a64:"));
    EXPECT_TRUE(metrics["settle_time_s"]["wx"].is_null());
}

TEST(Commands, RunReportsBadInputs) {
    TempDir dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_run({kBaseline, dir.path(), {"inertia.jx=-1"}}, log), kExitUsage);
    EXPECT_NE(log.str().find("inertia.jx"), std::string::npos);
    EXPECT_EQ(cmd_run({kBaseline, "/proc/detumble-nope", {"duration=0.1"}}, log), kExitUsage);
    EXPECT_EQ(cmd_run({kBaseline, dir.path(), {"newton.x=1"}}, log), kExitUsage);
}

TEST(Commands, RunReportsControllerFailure) {
    TempDir dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_run({kBaseline, dir.path(), {"duration=1", "mpc.newton_max_iters=1"}}, log), kExitAbort);
}

TEST(Commands, CompareNeedsTwoDistinctControllers) {
    TempDir dir;
    std::ostringstream out;
    std::ostringstream log;
    EXPECT_EQ(cmd_compare({kBaseline, dir.path(), {}, {"mpc", "mpc"}}, out, log), kExitUsage);
    EXPECT_EQ(cmd_compare({kBaseline, dir.path(), {}, {"mpc"}}, out, log), kExitUsage);
    EXPECT_EQ(cmd_compare({kBaseline, dir.path(), {}, {"mpc", "pid"}}, out, log), kExitUsage);
}

TEST(Commands, CompareShortRun) {
    TempDir dir;
    std::ostringstream out;
    std::ostringstream log;
    ASSERT_EQ(cmd_compare({kBaseline, dir.path(), {"duration=2"}}, out, log), kExitOk) << log.str();
    EXPECT_TRUE(fs::exists(dir.path() / "bdot-x" / "trace.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "mpc" / "metrics.json"));
    const std::string table = slurp(dir.path() / "comparison.csv");
    EXPECT_EQ(out.str(), table);
    EXPECT_NE(table.find("metric,bdot-x,mpc"), std::string::npos);
    EXPECT_NE(table.find("settle_wx_s,unsettled,unsettled"), std::string::npos);
    EXPECT_NE(table.find("min_v,,"), std::string::npos);
}

// --- plots -------------------------------------------------------------------------

TraceTable short_trace(ControllerKind kind) {
    ScenarioConfig cfg;
    cfg.controller = kind;
    cfg.duration = 5.0;
    std::stringstream io;
    write_trace(io, run_scenario(cfg).records);
    return read_trace(io);
}

TEST(Plot, DeterministicSvg) {
    const TraceTable trace = short_trace(ControllerKind::mpc);
    for (const auto kind : {PlotKind::rates, PlotKind::inputs, PlotKind::residual, PlotKind::lyapunov}) {
        const std::string svg = render_plot(trace, kind);
        EXPECT_EQ(svg, render_plot(trace, kind));
        EXPECT_TRUE(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
    }
    const std::string rates = render_plot(trace, PlotKind::rates);
    EXPECT_NE(rates.find("deg/s"), std::string::npos);
}

TEST(Plot, MissingColumnIsNamed) {
    const TraceTable trace = short_trace(ControllerKind::bdot_x);
    try {
        render_plot(trace, PlotKind::inputs);
        FAIL() << "expected PlotError";
    } catch (const PlotError& err) {
        EXPECT_NE(std::string(err.what()).find("'v'"), std::string::npos) << err.what();
    }
    TraceTable narrowed = trace;
    narrowed.columns[1] = "other";
    EXPECT_THROW(render_plot(narrowed, PlotKind::rates), PlotError);
}

TEST(Plot, EmptyTraceWritesNothing) {
    TempDir dir;
    const fs::path trace = dir.path() / "trace.csv";
    {
        std::ofstream out(trace);
        write_trace(out, {});
    }
    std::ostringstream log;
    EXPECT_EQ(cmd_plot(trace, "rates", dir.path() / "rates.svg", log), kExitUsage);
    EXPECT_FALSE(fs::exists(dir.path() / "rates.svg"));
    EXPECT_EQ(cmd_plot(trace, "bogus", dir.path() / "x.svg", log), kExitUsage);
}

TEST(Plot, ParseKinds) {
    EXPECT_EQ(parse_plot_kind("residual"), PlotKind::residual);
    EXPECT_FALSE(parse_plot_kind("Rates").has_value());
    EXPECT_EQ(required_columns(PlotKind::rates), (std::vector<std::string>{"t", "wx", "wy", "wz"}));
}

}  // namespace
}  // namespace detumble::cli
