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

#ifndef DETUMBLE_CLI_COMMANDS_HPP
#define DETUMBLE_CLI_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detumble/simulation.hpp"

namespace detumble::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,  // bad arguments, config or I/O
    kExitAbort = 2,  // simulation aborted or controller failed to start
};

struct Invocation {
    std::filesystem::path config;
    std::filesystem::path out;
    std::vector<std::string> overrides;
    std::vector<std::string> controllers{"bdot-x", "mpc"};  // compare only
};

/// metrics.json document for one run.
nlohmann::json metrics_json(const ScenarioConfig& cfg, const ScenarioResult& result);

/// Side-by-side metric table, one column per run, as CSV text. Settle times
/// read "unsettled" when an axis never settles; MPC-only metrics are empty
/// for B-dot runs.
std::string comparison_table(const std::vector<std::string>& names,
                             const std::vector<ScenarioResult>& results);

/// Writes <out>/trace.csv and <out>/metrics.json.
int cmd_run(const Invocation& invocation, std::ostream& log);

/// Runs each requested controller on the same config, concurrently, into
/// <out>/<controller>/ and writes <out>/comparison.csv, echoing it to `out`.
int cmd_compare(const Invocation& invocation, std::ostream& out, std::ostream& log);

int cmd_plot(const std::filesystem::path& trace, const std::string& kind,
             const std::filesystem::path& svg, std::ostream& log);

}  // namespace detumble::cli

#endif  // DETUMBLE_CLI_COMMANDS_HPP
