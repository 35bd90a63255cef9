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

#include "detumble/simulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detumble/bdot.hpp"

namespace detumble {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

template <typename Fn>
void with_prefix(const char* prefix, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(std::string(prefix) + "." + err.what());
    }
}

void require(bool ok, const char* message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

struct Derivative {
    Vec3 omega_rate;
    Vec4 attitude_rate;
};

Derivative body_derivative(const Vec3& omega, const Vec4& attitude, const Vec3& torque,
                           const InertiaTensor& inertia) {
    return {euler_rates(omega, torque, inertia),
            quaternion_rate(AttitudeQuaternion(attitude), omega)};
}

}  // namespace

std::string_view to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::bdot_full: return "bdot-full";
        case ControllerKind::bdot_x: return "bdot-x";
        case ControllerKind::mpc: return "mpc";
    }
    return "unknown";
}

std::optional<ControllerKind> parse_controller(std::string_view name) {
    if (name == "bdot-full") return ControllerKind::bdot_full;
    if (name == "bdot-x") return ControllerKind::bdot_x;
    if (name == "mpc") return ControllerKind::mpc;
    return std::nullopt;
}

std::string_view to_string(BdotRateSource source) {
    return source == BdotRateSource::exact ? "exact" : "finite-difference";
}

std::optional<BdotRateSource> parse_rate_source(std::string_view name) {
    if (name == "finite-difference") return BdotRateSource::finite_difference;
    if (name == "exact") return BdotRateSource::exact;
    return std::nullopt;
}

void ScenarioConfig::validate() const {
    with_prefix("inertia", [&] { inertia.validate(); });
    with_prefix("orbit", [&] { orbit.validate(); });
    with_prefix("field", [&] { field.validate(); });
    with_prefix("mpc", [&] {
        horizon.validate();
        continuation.validate();
    });
    with_prefix("weights", [&] { weights.validate(); });

    require(m_max > 0.0 && std::isfinite(m_max), "actuator.m_max must be positive");
    require(initial_rates.allFinite(), "initial.omega must be finite");
    require(std::abs(initial_attitude.norm() - 1.0) < 1e-6, "initial.attitude must be a unit quaternion");
    require(duration > 0.0 && std::isfinite(duration), "duration must be positive");
    require(control_period > 0.0, "control_period must be positive");
    require(inner_step > 0.0 && inner_step <= control_period * (1.0 + 1e-12),
            "inner_step must lie in (0, control_period]");
    const double substeps = control_period / inner_step;
    require(std::abs(substeps - std::round(substeps)) < 1e-9,
            "inner_step must divide control_period");
    require(settle_threshold_deg_s > 0.0, "settle_threshold_deg_s must be positive");
    require(std::abs(continuation.sampling_period - control_period) < 1e-12,
            "mpc.sampling_period must equal control_period");
    require(newton.max_iterations >= 1, "mpc.newton_max_iters must be at least 1");
}

BodyState rk4_step(const BodyState& state, const Vec3& torque, const InertiaTensor& inertia,
                   double dt) {
    const Vec3& w0 = state.omega;
    const Vec4& q0 = state.attitude.coeffs();

    const Derivative k1 = body_derivative(w0, q0, torque, inertia);
    const Derivative k2 = body_derivative(w0 + 0.5 * dt * k1.omega_rate,
                                          q0 + 0.5 * dt * k1.attitude_rate, torque, inertia);
    const Derivative k3 = body_derivative(w0 + 0.5 * dt * k2.omega_rate,
                                          q0 + 0.5 * dt * k2.attitude_rate, torque, inertia);
    const Derivative k4 = body_derivative(w0 + dt * k3.omega_rate, q0 + dt * k3.attitude_rate,
                                          torque, inertia);

    BodyState next;
    next.omega = w0 + dt / 6.0 *
                          (k1.omega_rate + 2.0 * k2.omega_rate + 2.0 * k3.omega_rate + k4.omega_rate);
    const Vec4 q = q0 + dt / 6.0 *
                            (k1.attitude_rate + 2.0 * k2.attitude_rate + 2.0 * k3.attitude_rate +
                             k4.attitude_rate);
    next.attitude = AttitudeQuaternion(q).normalized();
    return next;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const StepObserver& observer) {
    cfg.validate();

    const auto sample_count = static_cast<std::size_t>(std::floor(cfg.duration / cfg.control_period + 1e-9));
    const int substeps = static_cast<int>(std::lround(cfg.control_period / cfg.inner_step));
    const double dt_inner = cfg.control_period / substeps;

    std::optional<NmpcController> mpc;
    if (cfg.controller == ControllerKind::mpc) {
        mpc.emplace(NmpcController::Settings{cfg.inertia, cfg.m_max, cfg.horizon, cfg.continuation,
                                             cfg.weights, cfg.newton});
    }

    ScenarioResult result;
    result.records.reserve(sample_count + 1);
    BodyState state{cfg.initial_rates, cfg.initial_attitude.normalized()};
    std::optional<Vec3> previous_field;
    long long gmres_total = 0;

    for (std::size_t k = 0; k <= sample_count; ++k) {
        const double t = static_cast<double>(k) * cfg.control_period;
        const Vec3 position = propagate_position(cfg.orbit, t);
        const Vec3 field = field_in_body(state.attitude, dipole_field_inertial(position, t, cfg.field));

        SimulationRecord record;
        record.t = t;
        record.omega = state.omega;
        record.attitude = state.attitude;
        record.field_body = field;
        record.lyapunov = lyapunov_value(state.omega, cfg.inertia);

        Vec3 dipole = Vec3::Zero();
        std::optional<NmpcController::Step> mpc_step;
        if (state.omega.allFinite() && state.attitude.coeffs().allFinite()) {
            if (mpc) {
                mpc_step = mpc->update(t, state.omega, field);
                dipole = mpc_step->command.dipole;
                record.v = mpc_step->stage0.v;
                record.rho0 = mpc_step->stage0.rho;
                record.f_norm = mpc_step->f_norm;
                record.condition = mpc_step->condition;
                record.clamped = mpc_step->command.clamped;
                gmres_total += mpc_step->gmres_iterations;
                result.solver.max_gmres_iterations =
                    std::max(result.solver.max_gmres_iterations, mpc_step->gmres_iterations);
                result.solver.gmres_breakdowns += mpc_step->breakdown ? 1 : 0;
                result.solver.clamped_steps += mpc_step->command.clamped ? 1 : 0;
            } else {
                Vec3 bdot = Vec3::Zero();
                if (cfg.bdot_rate_source == BdotRateSource::exact) {
                    bdot = -state.omega.cross(field);
                } else if (previous_field) {
                    bdot = bdot_estimate(*previous_field, field, cfg.control_period);
                }
                dipole = cfg.controller == ControllerKind::bdot_full
                             ? bdot_command_full(bdot, cfg.m_max)
                             : bdot_command_single_axis(bdot, cfg.m_max);
            }
        }
        record.mx = dipole.x();
        result.records.push_back(record);
        if (observer) {
            observer(StepInfo{k, &result.records.back(), mpc_step ? &*mpc_step : nullptr});
        }

        const bool finite = state.omega.allFinite() && state.attitude.coeffs().allFinite() &&
                            field.allFinite() && dipole.allFinite() &&
                            (!record.f_norm || std::isfinite(*record.f_norm));
        if (!finite) {
            result.aborted = true;
            result.abort_index = k;
            result.message = "non-finite state or command at record " + std::to_string(k) +
                             " (t = " + std::to_string(t) + " s)";
            break;
        }
        if (k == sample_count) {
            break;
        }

        const Vec3 torque = magnetic_torque(dipole, field);
        for (int s = 0; s < substeps; ++s) {
            state = rk4_step(state, torque, cfg.inertia, dt_inner);
        }
        previous_field = field;
    }

    if (mpc && !result.records.empty()) {
        result.solver.mean_gmres_iterations =
            static_cast<double>(gmres_total) / static_cast<double>(result.records.size());
    }
    result.metrics = compute_metrics(result.records, cfg.settle_threshold_deg_s * kDegToRad);
    return result;
}

DetumbleMetrics compute_metrics(std::span<const SimulationRecord> records, double settle_threshold) {
    DetumbleMetrics metrics;
    if (records.empty()) {
        return metrics;
    }
    for (int axis = 0; axis < 3; ++axis) {
        std::optional<std::size_t> last_above;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (!(std::abs(records[i].omega[axis]) < settle_threshold)) {
                last_above = i;
            }
        }
        if (!last_above) {
            metrics.settle_time[static_cast<std::size_t>(axis)] = records.front().t;
        } else if (*last_above + 1 < records.size()) {
            metrics.settle_time[static_cast<std::size_t>(axis)] = records[*last_above + 1].t;
        }
    }
    metrics.final_rates = records.back().omega;
    for (const auto& record : records) {
        if (record.f_norm) {
            metrics.max_f_norm = std::max(metrics.max_f_norm.value_or(*record.f_norm), *record.f_norm);
        }
        if (record.v) {
            metrics.min_v = std::min(metrics.min_v.value_or(*record.v), *record.v);
        }
    }
    return metrics;
}

}  // namespace detumble
