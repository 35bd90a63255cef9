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

#include "detumble/cli/config.hpp"

#include <fstream>
#include <sstream>

namespace detumble::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Rejects keys absent from the reference document and type-mismatched
// sections.
void check_known(const json& doc, const json& reference, const std::string& prefix) {
    if (!doc.is_object()) {
        throw ConfigError((prefix.empty() ? std::string("config") : prefix) +
                          ": expected an object");
    }
    for (const auto& [key, value] : doc.items()) {
        const std::string path = join(prefix, key);
        if (!reference.contains(key)) {
            throw ConfigError(path + ": unknown key");
        }
        if (reference.at(key).is_object()) {
            check_known(value, reference.at(key), path);
        }
    }
}

void overlay(json& base, const json& patch) {
    for (const auto& [key, value] : patch.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object()) {
            overlay(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

class Reader {
public:
    explicit Reader(const json& doc) : doc_(doc) {}

    double number(const std::string& path) const {
        const json& node = at(path);
        if (!node.is_number()) {
            throw ConfigError(path + ": expected a number");
        }
        return node.get<double>();
    }

    int integer(const std::string& path) const {
        const json& node = at(path);
        if (!node.is_number_integer()) {
            throw ConfigError(path + ": expected an integer");
        }
        return node.get<int>();
    }

    std::string string(const std::string& path) const {
        const json& node = at(path);
        if (!node.is_string()) {
            throw ConfigError(path + ": expected a string");
        }
        return node.get<std::string>();
    }

    template <int Size>
    Eigen::Matrix<double, Size, 1> vector(const std::string& path) const {
        const json& node = at(path);
        if (!node.is_array() || node.size() != Size) {
            throw ConfigError(path + ": expected an array of " + std::to_string(Size) + " numbers");
        }
        Eigen::Matrix<double, Size, 1> out;
        for (int i = 0; i < Size; ++i) {
            if (!node[static_cast<std::size_t>(i)].is_number()) {
                throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
            }
            out[i] = node[static_cast<std::size_t>(i)].get<double>();
        }
        return out;
    }

private:
    const json& at(const std::string& path) const {
        const json* node = &doc_;
        std::stringstream parts(path);
        std::string key;
        while (std::getline(parts, key, '.')) {
            node = &node->at(key);
        }
        return *node;
    }

    const json& doc_;
};

DipoleMode parse_mode(const std::string& name) {
    if (name == "tilted") return DipoleMode::tilted;
    if (name == "aligned") return DipoleMode::aligned;
    throw ConfigError("field.mode: expected \"tilted\" or \"aligned\", got \"" + name + "\"");
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace

nlohmann::json to_json(const ScenarioConfig& cfg) {
    const auto vec = [](const auto& v) {
        json out = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            out.push_back(v[i]);
        }
        return out;
    };
    json doc;
    doc["controller"] = std::string(to_string(cfg.controller));
    doc["bdot_rate_source"] = std::string(to_string(cfg.bdot_rate_source));
    doc["duration"] = cfg.duration;
    doc["control_period"] = cfg.control_period;
    doc["inner_step"] = cfg.inner_step;
    doc["settle_threshold_deg_s"] = cfg.settle_threshold_deg_s;
    doc["inertia"] = {{"jx", cfg.inertia.jx}, {"jy", cfg.inertia.jy}, {"jz", cfg.inertia.jz}};
    doc["actuator"] = {{"m_max", cfg.m_max}};
    doc["initial"] = {{"omega", vec(cfg.initial_rates)},
                      {"attitude", vec(cfg.initial_attitude.coeffs())}};
    doc["orbit"] = {{"semi_major_axis", cfg.orbit.semi_major_axis},
                    {"eccentricity", cfg.orbit.eccentricity},
                    {"inclination", cfg.orbit.inclination},
                    {"raan", cfg.orbit.raan},
                    {"arg_perigee", cfg.orbit.arg_perigee},
                    {"mean_anomaly_epoch", cfg.orbit.mean_anomaly_epoch}};
    doc["field"] = {{"b0", cfg.field.b0},
                    {"tilt_deg", cfg.field.tilt_deg},
                    {"earth_rate", cfg.field.earth_rate},
                    {"initial_phase_deg", cfg.field.initial_phase_deg},
                    {"mode", cfg.field.mode == DipoleMode::tilted ? "tilted" : "aligned"}};
    doc["mpc"] = {{"horizon_length", cfg.horizon.length},
                  {"steps", cfg.horizon.steps},
                  {"zeta", cfg.continuation.zeta},
                  {"fd_step", cfg.continuation.fd_step},
                  {"sampling_period", cfg.continuation.sampling_period},
                  {"gmres_max_iters", cfg.continuation.gmres_max_iters},
                  {"gmres_tol", cfg.continuation.gmres_tol},
                  {"newton_max_iters", cfg.newton.max_iterations},
                  {"newton_tolerance_scale", cfg.newton.tolerance_scale}};
    doc["weights"] = {{"threshold_deg_s", cfg.weights.threshold_deg_s},
                      {"q_condition1", vec(cfg.weights.q_condition1)},
                      {"q_condition2", vec(cfg.weights.q_condition2)},
                      {"r1", cfg.weights.r1},
                      {"r2", cfg.weights.r2}};
    return doc;
}

ScenarioConfig from_json(const nlohmann::json& doc) {
    const json reference = to_json(ScenarioConfig{});
    check_known(doc, reference, "");

    json merged = reference;
    overlay(merged, doc);
    const auto given = [&](const char* section, const char* key) {
        return doc.contains(section) && doc.at(section).contains(key);
    };
    if (given("mpc", "steps") && !given("mpc", "gmres_max_iters") &&
        merged["mpc"]["steps"].is_number_integer()) {
        merged["mpc"]["gmres_max_iters"] = 3 * merged["mpc"]["steps"].get<int>();
    }
    if (!given("mpc", "sampling_period")) {
        merged["mpc"]["sampling_period"] = merged["control_period"];
    }

    const Reader r(merged);
    ScenarioConfig cfg;

    const std::string controller = r.string("controller");
    const auto kind = parse_controller(controller);
    if (!kind) {
        throw ConfigError("controller: expected \"bdot-full\", \"bdot-x\" or \"mpc\", got \"" +
                          controller + "\"");
    }
    cfg.controller = *kind;
    const std::string source = r.string("bdot_rate_source");
    const auto rate_source = parse_rate_source(source);
    if (!rate_source) {
        throw ConfigError("bdot_rate_source: expected \"finite-difference\" or \"exact\", got \"" +
                          source + "\"");
    }
    cfg.bdot_rate_source = *rate_source;

    cfg.duration = r.number("duration");
    cfg.control_period = r.number("control_period");
    cfg.inner_step = r.number("inner_step");
    cfg.settle_threshold_deg_s = r.number("settle_threshold_deg_s");

    cfg.inertia = {r.number("inertia.jx"), r.number("inertia.jy"), r.number("inertia.jz")};
    cfg.m_max = r.number("actuator.m_max");
    cfg.initial_rates = r.vector<3>("initial.omega");
    cfg.initial_attitude = AttitudeQuaternion(r.vector<4>("initial.attitude"));

    cfg.orbit = {r.number("orbit.semi_major_axis"), r.number("orbit.eccentricity"),
                 r.number("orbit.inclination"),     r.number("orbit.raan"),
                 r.number("orbit.arg_perigee"),     r.number("orbit.mean_anomaly_epoch")};

    cfg.field.b0 = r.number("field.b0");
    cfg.field.tilt_deg = r.number("field.tilt_deg");
    cfg.field.earth_rate = r.number("field.earth_rate");
    cfg.field.initial_phase_deg = r.number("field.initial_phase_deg");
    cfg.field.mode = parse_mode(r.string("field.mode"));

    cfg.horizon.length = r.number("mpc.horizon_length");
    cfg.horizon.steps = r.integer("mpc.steps");
    cfg.continuation.zeta = r.number("mpc.zeta");
    cfg.continuation.fd_step = r.number("mpc.fd_step");
    cfg.continuation.sampling_period = r.number("mpc.sampling_period");
    cfg.continuation.gmres_max_iters = r.integer("mpc.gmres_max_iters");
    cfg.continuation.gmres_tol = r.number("mpc.gmres_tol");
    cfg.newton.max_iterations = r.integer("mpc.newton_max_iters");
    cfg.newton.tolerance_scale = r.number("mpc.newton_tolerance_scale");

    cfg.weights.threshold_deg_s = r.number("weights.threshold_deg_s");
    cfg.weights.q_condition1 = r.vector<3>("weights.q_condition1");
    cfg.weights.q_condition2 = r.vector<3>("weights.q_condition2");
    cfg.weights.r1 = r.number("weights.r1");
    cfg.weights.r2 = r.number("weights.r2");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    return cfg;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override \"" + assignment + "\": expected key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }

    // Validate the path against the full schema so a typo fails even when
    // the document omits the section.
    const json reference = to_json(ScenarioConfig{});
    const json* ref = &reference;
    json* node = &doc;
    std::stringstream parts(key);
    std::string part;
    std::string path;
    std::vector<std::string> keys;
    while (std::getline(parts, part, '.')) {
        keys.push_back(part);
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        path = join(path, keys[i]);
        if (!ref->is_object() || !ref->contains(keys[i])) {
            throw ConfigError(path + ": unknown override key");
        }
        ref = &ref->at(keys[i]);
        if (i + 1 == keys.size()) {
            (*node)[keys[i]] = value;
        } else {
            if (!node->contains(keys[i])) {
                (*node)[keys[i]] = json::object();
            }
            node = &(*node)[keys[i]];
            if (!node->is_object()) {
                throw ConfigError(path + ": expected an object");
            }
        }
    }
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(path.string() + ": parse error: " + err.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(path.string() + ": top level must be an object");
    }
    for (const auto& assignment : overrides) {
        apply_override(doc, assignment);
    }
    return from_json(doc);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    return fnv1a(to_json(cfg).dump());
}

}  // namespace detumble::cli
