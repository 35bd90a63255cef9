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

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "detumble/gmres.hpp"
#include "detumble/nmpc.hpp"
#include "detumble/simulation.hpp"

namespace {

using namespace detumble;

const InertiaTensor kInertia{0.0045870, 0.031420, 0.031249};
const Vec3 kOmega{0.1, 0.1, 0.1};

HorizonContext context(int steps) {
    HorizonContext ctx;
    ctx.inertia = kInertia;
    ctx.horizon = {10.0, steps};
    ctx.weights = select_weights(kOmega, WeightSchedule{});
    ctx.m_max = 10.0;
    ctx.field = {4.8e-6, 2.8e-6, 2.65e-5};
    ctx.field_rate = {1e-7, -2e-7, 5e-8};
    return ctx;
}

void BM_Rk4Step(benchmark::State& state) {
    BodyState s{kOmega, AttitudeQuaternion::identity()};
    const Vec3 torque{0.0, -2.6e-4, 2.8e-5};
    for (auto _ : state) {
        s = rk4_step(s, torque, kInertia, 0.1);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Rk4Step);

void BM_KktResidual(benchmark::State& state) {
    const HorizonContext ctx = context(static_cast<int>(state.range(0)));
    const SolutionVector u = initialize_solution(kOmega, 0.0, ctx);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kkt_residual(u, kOmega, 0.0, ctx));
    }
}
BENCHMARK(BM_KktResidual)->Arg(5)->Arg(10)->Arg(20);

void BM_ContinuationStep(benchmark::State& state) {
    const HorizonContext ctx = context(static_cast<int>(state.range(0)));
    const SolutionVector u = initialize_solution(kOmega, 0.0, ctx);
    ContinuationParams params;
    params.gmres_max_iters = 3 * ctx.horizon.steps;
    const Vec3 rate{1e-4, -2e-4, 1e-4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(continuation_step(u, kOmega, rate, 0.0, params, ctx));
    }
}
BENCHMARK(BM_ContinuationStep)->Arg(5)->Arg(10)->Arg(20);

void BM_GmresDense(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n) / n + 3.0 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    const LinearOperator apply = [&a](const Eigen::VectorXd& x) { return Eigen::VectorXd(a * x); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmres_solve(apply, b, n, 1e-10));
    }
}
BENCHMARK(BM_GmresDense)->Arg(10)->Arg(30)->Arg(60);

void BM_MpcScenarioMinute(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.duration = 60.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(cfg));
    }
}
BENCHMARK(BM_MpcScenarioMinute)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
