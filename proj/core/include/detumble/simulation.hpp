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

#ifndef DETUMBLE_SIMULATION_HPP
#define DETUMBLE_SIMULATION_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detumble/attitude.hpp"
#include "detumble/geomagnetic.hpp"
#include "detumble/nmpc.hpp"
#include "detumble/orbit.hpp"

namespace detumble {

enum class ControllerKind { bdot_full, bdot_x, mpc };

/// Where the B-dot laws get the field rate from: a backward difference of
/// successive body-field samples, or the kinematic model -w x B.
enum class BdotRateSource { finite_difference, exact };

std::string_view to_string(ControllerKind kind);
std::optional<ControllerKind> parse_controller(std::string_view name);
std::string_view to_string(BdotRateSource source);
std::optional<BdotRateSource> parse_rate_source(std::string_view name);

/// Closed-loop scenario. Defaults describe the baseline deployment case.
struct ScenarioConfig {
    InertiaTensor inertia{0.0045870, 0.031420, 0.031249};
    double m_max = 10.0;
    Vec3 initial_rates{0.1, 0.1, 0.1};
    AttitudeQuaternion initial_attitude;
    OrbitalElements orbit{6691.6, 0.00046440, 96.700, 100.90, 119.70, 240.49};
    DipoleModelConfig field;

    ControllerKind controller = ControllerKind::mpc;
    BdotRateSource bdot_rate_source = BdotRateSource::finite_difference;

    double duration = 15000.0;       // [s]
    double control_period = 0.1;     // [s]
    double inner_step = 0.1;         // [s]
    double settle_threshold_deg_s = 0.1;

    HorizonConfig horizon;
    ContinuationParams continuation;
    WeightSchedule weights;
    NewtonOptions newton;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct BodyState {
    Vec3 omega = Vec3::Zero();
    AttitudeQuaternion attitude;
};

/// One row of the closed-loop log, taken at each control sample.
/// MPC-only quantities are empty for the B-dot controllers.
struct SimulationRecord {
    double t = 0.0;
    Vec3 omega = Vec3::Zero();
    AttitudeQuaternion attitude;
    Vec3 field_body = Vec3::Zero();
    double mx = 0.0;
    std::optional<double> v;
    std::optional<double> rho0;
    std::optional<double> f_norm;
    double lyapunov = 0.0;
    std::optional<int> condition;
    std::optional<bool> clamped;
};

struct DetumbleMetrics {
    std::array<std::optional<double>, 3> settle_time;  // empty when unsettled
    Vec3 final_rates = Vec3::Zero();
    std::optional<double> max_f_norm;
    std::optional<double> min_v;
};

struct SolverStats {
    int max_gmres_iterations = 0;
    double mean_gmres_iterations = 0.0;
    int gmres_breakdowns = 0;
    int clamped_steps = 0;
};

struct ScenarioResult {
    std::vector<SimulationRecord> records;
    DetumbleMetrics metrics;
    SolverStats solver;
    bool aborted = false;
    std::optional<std::size_t> abort_index;
    std::string message;
};

/// Per-step view handed to an optional observer (tests, diagnostics).
struct StepInfo {
    std::size_t index = 0;
    const SimulationRecord* record = nullptr;
    const NmpcController::Step* mpc = nullptr;  // null for B-dot
};
using StepObserver = std::function<void(const StepInfo&)>;

/// Classical RK4 on (w, q) with the torque held; q is renormalised.
BodyState rk4_step(const BodyState& state, const Vec3& torque, const InertiaTensor& inertia,
                   double dt);

/// Runs the closed loop for floor(duration / control_period) + 1 samples.
/// Controller initialisation errors propagate as exceptions; a non-finite
/// state ends the run early with `aborted` set and the partial log kept.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const StepObserver& observer = {});

/// Settle time per axis is the first sample after which |w| stays below the
/// threshold [rad/s] through the end of the log.
DetumbleMetrics compute_metrics(std::span<const SimulationRecord> records, double settle_threshold);

}  // namespace detumble

#endif  // DETUMBLE_SIMULATION_HPP
