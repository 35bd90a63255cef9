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

#include "detumble/nmpc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace detumble {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Vec3 single_axis_torque(double mx, const Vec3& field) {
    return magnetic_torque(Vec3{mx, 0.0, 0.0}, field);
}

}  // namespace

void HorizonConfig::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("horizon_length must be positive");
    }
    if (steps < 1) {
        throw std::invalid_argument("steps must be at least 1");
    }
}

void WeightSchedule::validate() const {
    if (!(threshold_deg_s > 0.0)) {
        throw std::invalid_argument("threshold_deg_s must be positive");
    }
    if (!(q_condition1.minCoeff() > 0.0) || !(q_condition2.minCoeff() > 0.0)) {
        throw std::invalid_argument("q_condition1 and q_condition2 must be positive");
    }
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
        throw std::invalid_argument("r1 and r2 must be positive");
    }
}

void ContinuationParams::validate() const {
    if (!(zeta > 0.0)) {
        throw std::invalid_argument("zeta must be positive");
    }
    if (!(sampling_period > 0.0)) {
        throw std::invalid_argument("sampling_period must be positive");
    }
    if (!(fd_step > 0.0) || !(fd_step < sampling_period)) {
        throw std::invalid_argument("fd_step must lie in (0, sampling_period)");
    }
    if (gmres_max_iters < 1) {
        throw std::invalid_argument("gmres_max_iters must be at least 1");
    }
    if (!(gmres_tol > 0.0)) {
        throw std::invalid_argument("gmres_tol must be positive");
    }
}

StageWeights select_weights(const Vec3& omega, const WeightSchedule& schedule) {
    const double threshold = schedule.threshold_deg_s * kDegToRad;
    const bool fast_x = std::abs(omega.x()) >= threshold;
    return {fast_x ? schedule.q_condition1 : schedule.q_condition2, schedule.r1, schedule.r2,
            fast_x ? 1 : 2};
}

SolutionVector::SolutionVector(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() == 0 || values_.size() % kStageSize != 0) {
        throw std::invalid_argument("solution vector length must be a positive multiple of 3");
    }
}

ControlStage SolutionVector::stage(int i) const {
    const auto base = static_cast<Eigen::Index>(kStageSize * i);
    return {values_[base], values_[base + 1], values_[base + 2]};
}

void SolutionVector::set_stage(int i, const ControlStage& stage) {
    const auto base = static_cast<Eigen::Index>(kStageSize * i);
    values_[base] = stage.mx;
    values_[base + 1] = stage.v;
    values_[base + 2] = stage.rho;
}

double stage_cost(const Vec3& omega, const ControlStage& u, const StageWeights& weights) {
    return 0.5 * weights.q.dot(omega.cwiseProduct(omega)) + weights.r1 * u.mx * u.mx -
           weights.r2 * u.v;
}

double terminal_cost(const Vec3& omega) {
    return 0.5 * omega.squaredNorm();
}

double hamiltonian(const Vec3& omega, const ControlStage& u, const Vec3& costate, const Vec3& field,
                   const StageWeights& weights, const InertiaTensor& inertia, double m_max) {
    const Vec3 dynamics = euler_rates(omega, single_axis_torque(u.mx, field), inertia);
    const double constraint = u.mx * u.mx + u.v * u.v - m_max * m_max;
    return stage_cost(omega, u, weights) + costate.dot(dynamics) + u.rho * constraint;
}

Eigen::Vector2d hamiltonian_grad_u(const Vec3& omega, const ControlStage& u, const Vec3& costate,
                                   const Vec3& field, const StageWeights& weights,
                                   const InertiaTensor& inertia) {
    (void)omega;
    const double d_mx = 2.0 * weights.r1 * u.mx - costate.y() * field.z() / inertia.jy +
                        costate.z() * field.y() / inertia.jz + 2.0 * u.rho * u.mx;
    const double d_v = -weights.r2 + 2.0 * u.rho * u.v;
    return {d_mx, d_v};
}

Vec3 hamiltonian_grad_w(const Vec3& omega, const Vec3& costate, const StageWeights& weights,
                        const InertiaTensor& inertia) {
    const auto& [jx, jy, jz] = inertia;
    const double kx = (jy - jz) / jx;
    const double ky = (jz - jx) / jy;
    const double kz = (jx - jy) / jz;
    const auto& l = costate;
    const auto& w = omega;
    return {weights.q.x() * w.x() + l.y() * ky * w.z() + l.z() * kz * w.y(),
            weights.q.y() * w.y() + l.x() * kx * w.z() + l.z() * kz * w.x(),
            weights.q.z() * w.z() + l.x() * kx * w.y() + l.y() * ky * w.x()};
}

std::vector<Vec3> forward_rollout(const Vec3& omega_now, const SolutionVector& u,
                                  std::span<const Vec3> fields, const HorizonConfig& horizon,
                                  const InertiaTensor& inertia) {
    const int n = horizon.steps;
    const double dtau = horizon.stage_length();
    std::vector<Vec3> states(static_cast<std::size_t>(n) + 1);
    states[0] = omega_now;
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const Vec3 torque = single_axis_torque(u.stage(i).mx, fields[idx]);
        states[idx + 1] = states[idx] + dtau * euler_rates(states[idx], torque, inertia);
    }
    return states;
}

std::vector<Vec3> backward_costates(std::span<const Vec3> states, const SolutionVector& u,
                                    std::span<const Vec3> fields, const StageWeights& weights,
                                    const HorizonConfig& horizon, const InertiaTensor& inertia) {
    (void)u;
    (void)fields;
    const int n = horizon.steps;
    const double dtau = horizon.stage_length();
    std::vector<Vec3> costates(static_cast<std::size_t>(n) + 1);
    costates[static_cast<std::size_t>(n)] = states[static_cast<std::size_t>(n)];
    for (int i = n - 1; i >= 0; --i) {
        const auto idx = static_cast<std::size_t>(i);
        costates[idx] = costates[idx + 1] +
                        dtau * hamiltonian_grad_w(states[idx], costates[idx + 1], weights, inertia);
    }
    return costates;
}

double horizon_cost(const Vec3& omega_now, const SolutionVector& u, std::span<const Vec3> fields,
                    const StageWeights& weights, const HorizonConfig& horizon,
                    const InertiaTensor& inertia) {
    const auto states = forward_rollout(omega_now, u, fields, horizon, inertia);
    double cost = terminal_cost(states.back());
    for (int i = 0; i < horizon.steps; ++i) {
        cost += horizon.stage_length() * stage_cost(states[static_cast<std::size_t>(i)], u.stage(i), weights);
    }
    return cost;
}

Eigen::VectorXd kkt_residual(const SolutionVector& u, const Vec3& omega, double t,
                             const HorizonContext& ctx) {
    const int n = ctx.horizon.steps;
    const std::vector<Vec3> fields(static_cast<std::size_t>(n), ctx.field_at(t));
    const auto states = forward_rollout(omega, u, fields, ctx.horizon, ctx.inertia);
    const auto costates = backward_costates(states, u, fields, ctx.weights, ctx.horizon, ctx.inertia);

    const double m_max_sq = ctx.m_max * ctx.m_max;
    Eigen::VectorXd residual(SolutionVector::kStageSize * n);
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const ControlStage stage = u.stage(i);
        const Eigen::Vector2d grad = hamiltonian_grad_u(states[idx], stage, costates[idx + 1],
                                                        fields[idx], ctx.weights, ctx.inertia);
        residual[3 * i] = grad[0];
        residual[3 * i + 1] = grad[1];
        residual[3 * i + 2] = stage.mx * stage.mx + stage.v * stage.v - m_max_sq;
    }
    return residual;
}

void project_onto_constraint(SolutionVector& u, double m_max) {
    for (int i = 0; i < u.steps(); ++i) {
        ControlStage stage = u.stage(i);
        const double radius = std::hypot(stage.mx, stage.v);
        if (radius > 0.0) {
            stage.mx *= m_max / radius;
            stage.v *= m_max / radius;
            u.set_stage(i, stage);
        }
    }
}

double max_constraint_residual(const SolutionVector& u, double m_max) {
    double worst = 0.0;
    for (int i = 0; i < u.steps(); ++i) {
        const ControlStage stage = u.stage(i);
        worst = std::max(worst, std::abs(stage.mx * stage.mx + stage.v * stage.v - m_max * m_max));
    }
    return worst;
}

ContinuationResult continuation_step(const SolutionVector& u, const Vec3& omega,
                                     const Vec3& omega_rate, double t,
                                     const ContinuationParams& params, const HorizonContext& ctx,
                                     const Eigen::VectorXd& rate_guess) {
    const double h = params.fd_step;
    const Vec3 omega_ahead = omega + h * omega_rate;
    const double t_ahead = t + h;

    const Eigen::VectorXd f_now = kkt_residual(u, omega, t, ctx);
    const Eigen::VectorXd f_ahead = kkt_residual(u, omega_ahead, t_ahead, ctx);
    const Eigen::VectorXd rhs = -params.zeta * f_now - (f_ahead - f_now) / h;

    SolutionVector probe = u;
    const LinearOperator jacobian_action = [&](const Eigen::VectorXd& direction) {
        probe.values() = u.values() + h * direction;
        return Eigen::VectorXd((kkt_residual(probe, omega_ahead, t_ahead, ctx) - f_ahead) / h);
    };

    const GmresResult solve =
        gmres_solve(jacobian_action, rhs, params.gmres_max_iters, params.gmres_tol, rate_guess);

    ContinuationResult result;
    result.gmres_iterations = solve.iterations;
    result.gmres_residual = solve.residual_norm;
    result.breakdown = solve.breakdown || !solve.x.allFinite();
    if (result.breakdown) {
        result.solution = u;
        result.rate = Eigen::VectorXd::Zero(u.values().size());
        return result;
    }
    result.rate = solve.x;
    result.solution = SolutionVector(Eigen::VectorXd(u.values() + params.sampling_period * solve.x));
    return result;
}

SolutionVector seed_solution(const HorizonContext& ctx) {
    SolutionVector seed(ctx.horizon.steps);
    const ControlStage stage{0.0, ctx.m_max, ctx.weights.r2 / (2.0 * ctx.m_max)};
    for (int i = 0; i < ctx.horizon.steps; ++i) {
        seed.set_stage(i, stage);
    }
    return seed;
}

std::optional<SolutionVector> solve_optimality(const SolutionVector& start, const Vec3& omega,
                                               double t, const HorizonContext& ctx,
                                               const NewtonOptions& options) {
    const int dim = SolutionVector::kStageSize * ctx.horizon.steps;
    const double tolerance =
        options.tolerance_scale * std::sqrt(static_cast<double>(dim)) * ctx.m_max * ctx.m_max;

    SolutionVector current = start;
    Eigen::VectorXd residual = kkt_residual(current, omega, t, ctx);
    double residual_norm = residual.norm();

    Eigen::MatrixXd jacobian(dim, dim);
    SolutionVector probe = current;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (residual_norm < tolerance) {
            return current;
        }
        for (int j = 0; j < dim; ++j) {
            const double step = 1e-6 * std::max(1.0, std::abs(current.values()[j]));
            probe.values() = current.values();
            probe.values()[j] += step;
            const Eigen::VectorXd plus = kkt_residual(probe, omega, t, ctx);
            probe.values()[j] -= 2.0 * step;
            const Eigen::VectorXd minus = kkt_residual(probe, omega, t, ctx);
            jacobian.col(j) = (plus - minus) / (2.0 * step);
        }
        const Eigen::VectorXd delta = jacobian.partialPivLu().solve(-residual);

        // Backtracking on |F|; the shortest step is taken even without decrease.
        double alpha = 1.0;
        SolutionVector trial = current;
        Eigen::VectorXd trial_residual;
        for (int k = 0; k < 30; ++k) {
            trial.values() = current.values() + alpha * delta;
            trial_residual = kkt_residual(trial, omega, t, ctx);
            if (trial_residual.allFinite() &&
                trial_residual.norm() <= (1.0 - 1e-4 * alpha) * residual_norm) {
                break;
            }
            alpha *= 0.5;
        }
        current = trial;
        residual = trial_residual;
        residual_norm = residual.norm();
    }
    if (residual_norm < tolerance) {
        return current;
    }
    return std::nullopt;
}

SolutionVector initialize_solution(const Vec3& omega0, double t0, const HorizonContext& ctx,
                                   const NewtonOptions& options) {
    auto solution = solve_optimality(seed_solution(ctx), omega0, t0, ctx, options);
    if (!solution) {
        throw std::runtime_error("initialize_solution: Newton iteration did not converge");
    }
    return *std::move(solution);
}

MpcCommand mpc_command(const SolutionVector& u, double m_max) {
    const double mx = u.stage(0).mx;
    const double clamped = std::clamp(mx, -m_max, m_max);
    return {Vec3{clamped, 0.0, 0.0}, clamped != mx};
}

NmpcController::NmpcController(Settings settings) : settings_(std::move(settings)) {
    settings_.inertia.validate();
    settings_.horizon.validate();
    settings_.continuation.validate();
    settings_.weights.validate();
    if (!(settings_.m_max > 0.0)) {
        throw std::invalid_argument("m_max must be positive");
    }
}

HorizonContext NmpcController::context_for(double t, const Vec3& omega, const Vec3& field) const {
    HorizonContext ctx;
    ctx.inertia = settings_.inertia;
    ctx.horizon = settings_.horizon;
    ctx.weights = select_weights(omega, settings_.weights);
    ctx.m_max = settings_.m_max;
    ctx.field = field;
    // Body-frame field drift predicted from the rotation alone.
    ctx.field_rate = -omega.cross(field);
    ctx.time = t;
    return ctx;
}

NmpcController::Step NmpcController::update(double t, const Vec3& omega, const Vec3& field) {
    const HorizonContext ctx = context_for(t, omega, field);
    Step step;
    if (!initialized_) {
        solution_ = initialize_solution(omega, t, ctx, settings_.newton);
        rate_ = Eigen::VectorXd::Zero(solution_.values().size());
        initialized_ = true;
    } else if (ctx.weights.condition != condition_) {
        // The residual jumps with the weights; restore F = 0 before continuing.
        if (auto resolved = solve_optimality(solution_, omega, t, ctx, settings_.newton)) {
            solution_ = *std::move(resolved);
            rate_.setZero();
            step.resolved = true;
        }
    }
    condition_ = ctx.weights.condition;

    step.command = mpc_command(solution_, settings_.m_max);
    step.stage0 = solution_.stage(0);
    step.f_norm = kkt_residual(solution_, omega, t, ctx).norm();
    step.max_constraint_residual = max_constraint_residual(solution_, settings_.m_max);
    step.condition = ctx.weights.condition;

    const Vec3 omega_rate =
        euler_rates(omega, magnetic_torque(step.command.dipole, field), settings_.inertia);
    ContinuationResult next =
        continuation_step(solution_, omega, omega_rate, t, settings_.continuation, ctx, rate_);
    step.gmres_iterations = next.gmres_iterations;
    step.breakdown = next.breakdown;
    solution_ = std::move(next.solution);
    rate_ = std::move(next.rate);
    if (settings_.project_constraint) {
        project_onto_constraint(solution_, settings_.m_max);
    }
    return step;
}

}  // namespace detumble
