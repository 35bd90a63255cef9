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

#ifndef DETUMBLE_CLI_CONFIG_HPP
#define DETUMBLE_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detumble/simulation.hpp"

namespace detumble::cli {

/// Parse, schema or validation failure. what() starts with the offending
/// key path when there is one, e.g. "inertia.jx: ...".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario document with every key present.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Builds a validated config from a (possibly partial) document. Omitted
/// keys take their defaults; unknown keys are rejected. When mpc.steps is
/// given without mpc.gmres_max_iters the latter follows as 3 * steps, and
/// mpc.sampling_period follows control_period unless set.
ScenarioConfig from_json(const nlohmann::json& doc);

/// Applies one "dotted.key=value" override to a document. The value is read
/// as JSON when it parses, otherwise as a bare string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads `path`, applies the overrides in order and validates.
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

/// 64-bit FNV-1a of the canonical (sorted-key, compact) config document.
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace detumble::cli

#endif  // DETUMBLE_CLI_CONFIG_HPP
