// Copyright 2026 The Infoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "infoplan/dynamics.hpp"
#include "infoplan/fim.hpp"
#include "infoplan/planner.hpp"
#include "infoplan/sensitivity.hpp"
#include "infoplan/ukf.hpp"

namespace infoplan {
namespace {

const InertialParams kRobot{9.7, 7.0, 7.0, 10.0};

RigidBodyState tumbling() {
  return RigidBodyState::from({1.0, -0.5, 0.3}, quat::from_axis_angle(Vector3(1, 1, 1).normalized(), 0.8),
                              {0.02, 0.0, -0.01}, {0.1, -0.05, 0.08});
}

ControlInput some_input() {
  ControlInput u;
  u.force = Vector3(0.2, -0.1, 0.05);
  u.torque = Vector3(0.03, 0.01, -0.02);
  return u;
}

void BM_Step(benchmark::State& state) {
  RigidBodyState x = tumbling();
  const ControlInput u = some_input();
  for (auto _ : state) {
    benchmark::DoNotOptimize(x = step(x, u, kRobot, 1e-3));
  }
}
BENCHMARK(BM_Step);

void BM_JointStep(benchmark::State& state) {
  StateVector x = tumbling().x;
  SensitivityMatrix phi = SensitivityMatrix::Zero();
  const Vector6 u = some_input().as_vector();
  for (auto _ : state) {
    detail::joint_step(x, phi, u, kRobot, 1e-3, {});
    benchmark::DoNotOptimize(x);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_JointStep);

void BM_PropagateJointInterval(benchmark::State& state) {
  const RigidBodyState x = tumbling();
  const ControlInput u = some_input();
  const int substeps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        propagate_joint_interval(x, SensitivityMatrix::Zero(), u, kRobot, 1.0, substeps));
  }
}
BENCHMARK(BM_PropagateJointInterval)->Arg(4)->Arg(10);

void BM_AOptimality(benchmark::State& state) {
  Fim f;
  HMatrix h = HMatrix::Random();
  f = f.accumulate(h, Vector6::Constant(1e-6));
  for (auto _ : state) benchmark::DoNotOptimize(a_optimality(f, 1e-3));
}
BENCHMARK(BM_AOptimality);

void BM_Solve(benchmark::State& state) {
  PlanProblem p;
  p.x0 = tumbling();
  p.theta = kRobot;
  p.t_now = 5.0;
  PlannerConfig cfg;
  cfg.horizon = static_cast<int>(state.range(0));
  cfg.substeps = 4;
  cfg.max_iterations = 20;
  const CostWeights w;
  const ControlBounds b = ControlBounds::symmetric(0.4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, w, b, cfg));
}
BENCHMARK(BM_Solve)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_UkfUpdate(benchmark::State& state) {
  const UkfConfig cfg;
  const EstimatorBelief b = EstimatorBelief::from_guess({11, 8, 6, 12}, Vector4::Constant(0.5));
  const RigidBodyState x = tumbling();
  const ControlInput u = some_input();
  const RigidBodyState next = integrate(x, u, kRobot, 1.0, 100);
  const Measurement y{next.v(), next.w()};
  for (auto _ : state) benchmark::DoNotOptimize(ukf_update(b, x, u, y, 1.0, cfg));
}
BENCHMARK(BM_UkfUpdate)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace infoplan

BENCHMARK_MAIN();
