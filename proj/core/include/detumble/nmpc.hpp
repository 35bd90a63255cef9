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

#ifndef DETUMBLE_NMPC_HPP
#define DETUMBLE_NMPC_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "detumble/attitude.hpp"
#include "detumble/gmres.hpp"

namespace detumble {

/// Prediction horizon of length `length` [s] split into `steps` Euler stages.
struct HorizonConfig {
    double length = 10.0;
    int steps = 10;

    double stage_length() const { return length / steps; }
    void validate() const;
};

/// Weights active over one horizon.
struct StageWeights {
    Vec3 q = Vec3::Zero();
    double r1 = 0.0;
    double r2 = 0.0;
    int condition = 1;
};

/// Two weight sets switched on |w_x|. Condition 1 (fast x spin) nearly
/// ignores the transverse rates so the controller may trade them for x-axis
/// damping; condition 2 weights all three axes.
struct WeightSchedule {
    double threshold_deg_s = 0.1;
    Vec3 q_condition1{3162.2776601683795, 1e-2, 1e-2};
    Vec3 q_condition2{3162.2776601683795, 10.0, 10.0};
    double r1 = 1e-2;
    double r2 = 1e-5;

    void validate() const;
};

/// |w_x| >= threshold selects condition 1, otherwise condition 2.
StageWeights select_weights(const Vec3& omega, const WeightSchedule& schedule);

/// Single-axis dipole m_x, dummy input v with m_x^2 + v^2 = m_max^2, and the
/// multiplier rho of that equality.
struct ControlStage {
    double mx = 0.0;
    double v = 0.0;
    double rho = 0.0;
};

/// Stacked horizon unknowns [m_x0, v0, rho0, ..., m_x(N-1), v(N-1), rho(N-1)].
class SolutionVector {
public:
    static constexpr int kStageSize = 3;

    SolutionVector() = default;
    explicit SolutionVector(int steps) : values_(Eigen::VectorXd::Zero(kStageSize * steps)) {}
    /// Throws std::invalid_argument unless the length is a positive multiple of 3.
    explicit SolutionVector(Eigen::VectorXd values);

    int steps() const { return static_cast<int>(values_.size()) / kStageSize; }
    ControlStage stage(int i) const;
    void set_stage(int i, const ControlStage& stage);

    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

private:
    Eigen::VectorXd values_;
};

/// Everything the optimality residual depends on besides U and w.
///
/// The body-frame field is held constant over the horizon. Its explicit time
/// dependence between controller samples is modelled linearly:
/// B(t) = field + (t - time) * field_rate.
struct HorizonContext {
    InertiaTensor inertia;
    HorizonConfig horizon;
    StageWeights weights;
    double m_max = 0.0;
    Vec3 field = Vec3::Zero();
    Vec3 field_rate = Vec3::Zero();
    double time = 0.0;

    Vec3 field_at(double t) const { return field + (t - time) * field_rate; }
};

struct ContinuationParams {
    double zeta = 10.0;             // [1/s]
    double fd_step = 1e-6;          // h [s]
    double sampling_period = 0.1;   // dt [s]
    int gmres_max_iters = 30;
    double gmres_tol = 1e-8;

    void validate() const;
};

struct NewtonOptions {
    int max_iterations = 100;
    double tolerance_scale = 1e-8;  // |F| < scale * sqrt(3N) * m_max^2
};

// Horizon building blocks.

/// 1/2 (Q1 wx^2 + Q2 wy^2 + Q3 wz^2) + R1 mx^2 - R2 v
double stage_cost(const Vec3& omega, const ControlStage& u, const StageWeights& weights);

/// 1/2 |w|^2 with unit weights.
double terminal_cost(const Vec3& omega);

double hamiltonian(const Vec3& omega, const ControlStage& u, const Vec3& costate, const Vec3& field,
                   const StageWeights& weights, const InertiaTensor& inertia, double m_max);

/// [dH/dm_x, dH/dv].
Eigen::Vector2d hamiltonian_grad_u(const Vec3& omega, const ControlStage& u, const Vec3& costate,
                                   const Vec3& field, const StageWeights& weights,
                                   const InertiaTensor& inertia);

/// dH/dw.
Vec3 hamiltonian_grad_w(const Vec3& omega, const Vec3& costate, const StageWeights& weights,
                        const InertiaTensor& inertia);

/// Predicted rates w*_0 .. w*_N by explicit Euler over the horizon.
std::vector<Vec3> forward_rollout(const Vec3& omega_now, const SolutionVector& u,
                                  std::span<const Vec3> fields, const HorizonConfig& horizon,
                                  const InertiaTensor& inertia);

/// Costates indexed like the states: entry i holds lambda*_i, with
/// lambda*_N = w*_N and lambda*_i = lambda*_(i+1) + dtau dH/dw(w*_i, u_i, lambda*_(i+1)).
/// Entry 0 is the sensitivity of the horizon cost to the current rate.
std::vector<Vec3> backward_costates(std::span<const Vec3> states, const SolutionVector& u,
                                    std::span<const Vec3> fields, const StageWeights& weights,
                                    const HorizonConfig& horizon, const InertiaTensor& inertia);

/// Discretised horizon cost: terminal cost plus dtau * sum of stage costs.
double horizon_cost(const Vec3& omega_now, const SolutionVector& u, std::span<const Vec3> fields,
                    const StageWeights& weights, const HorizonConfig& horizon,
                    const InertiaTensor& inertia);

/// Optimality residual F(U, w, t): per stage [dH/dm_x, dH/dv, m_x^2 + v^2 - m_max^2].
Eigen::VectorXd kkt_residual(const SolutionVector& u, const Vec3& omega, double t,
                             const HorizonContext& ctx);

/// Moves every stage's (m_x, v) to the nearest point of the circle
/// m_x^2 + v^2 = m_max^2. Stages with (m_x, v) = 0 are left untouched.
void project_onto_constraint(SolutionVector& u, double m_max);

/// Largest |m_x,i^2 + v_i^2 - m_max^2| over the horizon.
double max_constraint_residual(const SolutionVector& u, double m_max);

struct ContinuationResult {
    SolutionVector solution;
    Eigen::VectorXd rate;  // dU/dt from the linear solve (zero on breakdown)
    int gmres_iterations = 0;
    double gmres_residual = 0.0;
    bool breakdown = false;
};

/// One continuation update U <- U + dt * dU/dt, where dU/dt makes
/// dF/dt = -zeta F hold along forward-difference directional derivatives.
/// `rate_guess` warm-starts GMRES (pass an empty vector for a cold start).
/// On GMRES breakdown the input solution is returned unchanged and flagged.
ContinuationResult continuation_step(const SolutionVector& u, const Vec3& omega,
                                     const Vec3& omega_rate, double t,
                                     const ContinuationParams& params, const HorizonContext& ctx,
                                     const Eigen::VectorXd& rate_guess = Eigen::VectorXd());

/// Seed used by initialize_solution: m_x = 0, v = m_max, rho = R2 / (2 m_max).
SolutionVector seed_solution(const HorizonContext& ctx);

/// Damped Newton on F(U, w, t) = 0 with a central-difference Jacobian,
/// starting from `start`. Returns std::nullopt if |F| is still above the
/// tolerance after the iteration budget.
std::optional<SolutionVector> solve_optimality(const SolutionVector& start, const Vec3& omega,
                                               double t, const HorizonContext& ctx,
                                               const NewtonOptions& options = {});

/// Newton solve from seed_solution. Throws std::runtime_error if it fails
/// to converge.
SolutionVector initialize_solution(const Vec3& omega0, double t0, const HorizonContext& ctx,
                                   const NewtonOptions& options = {});

struct MpcCommand {
    Vec3 dipole = Vec3::Zero();
    bool clamped = false;
};

/// Actuates stage 0, clamping m_x to [-m_max, m_max].
MpcCommand mpc_command(const SolutionVector& u, double m_max);

/// Receding-horizon controller state for one simulation loop.
class NmpcController {
public:
    struct Settings {
        InertiaTensor inertia;
        double m_max = 10.0;
        HorizonConfig horizon;
        ContinuationParams continuation;
        WeightSchedule weights;
        NewtonOptions newton;
        bool project_constraint = true;
    };

    struct Step {
        MpcCommand command;
        ControlStage stage0;
        double f_norm = 0.0;
        double max_constraint_residual = 0.0;
        int condition = 1;
        int gmres_iterations = 0;
        bool breakdown = false;
        bool resolved = false;  // Newton re-solve after a weight switch
    };

    explicit NmpcController(Settings settings);

    /// Computes the command for the sampled rate and body field at time t,
    /// then advances the solution to the next sample. The first call solves
    /// the optimality conditions from scratch.
    Step update(double t, const Vec3& omega, const Vec3& field);

    bool initialized() const { return initialized_; }
    const SolutionVector& solution() const { return solution_; }
    const Settings& settings() const { return settings_; }

private:
    HorizonContext context_for(double t, const Vec3& omega, const Vec3& field) const;

    Settings settings_;
    SolutionVector solution_;
    Eigen::VectorXd rate_;
    int condition_ = 0;
    bool initialized_ = false;
};

}  // namespace detumble

#endif  // DETUMBLE_NMPC_HPP
