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
#ifndef INFOPLAN_CLOSED_LOOP_HPP_
#define INFOPLAN_CLOSED_LOOP_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infoplan/dynamics.hpp"
#include "infoplan/fim.hpp"
#include "infoplan/planner.hpp"
#include "infoplan/ukf.hpp"

namespace infoplan {

struct EpisodeFlags {
  bool info_weighting = true;
  bool param_updates = true;
};

struct ScenarioConfig {
  std::string name = "scenario";
  InertialParams true_params{9.7, 7.0, 7.0, 10.0};
  InertialParams initial_guess{9.7, 7.0, 7.0, 10.0};
  // Prior standard deviation of log(theta).
  Vector4 prior_log_std = Vector4::Constant(0.5);
  RigidBodyState x0;
  GoalSpec goal;
  double duration_max = 150.0;
  double control_rate = 1.0;
  int plant_substeps = 100;
  int goal_ticks = 3;
  NoiseSpec noise;
  // Standard deviation of the fused-state error handed to planner and
  // estimator (0 = exact fusion).
  double fusion_noise_std = 0.0;
  CostWeights weights;
  ControlBounds bounds = ControlBounds::symmetric(0.4, 0.1);
  PlannerConfig planner;
  // Historical FIM is scaled by this factor before seeding each horizon.
  double fim_forgetting = 1.0;
  EpisodeFlags flags;
  UkfConfig ukf;
  std::uint64_t seed = 1;

  double interval() const { return 1.0 / control_rate; }
  void validate() const;
};

struct EpisodeRow {
  double t = 0.0;
  RigidBodyState true_state;
  RigidBodyState fused_state;
  ControlInput u;
  // Estimator belief after folding in the measurement taken at t + interval.
  InertialParams theta_hat;
  Vector4 p_diag = Vector4::Zero();
  // Parameters the planner used for this tick's solve.
  InertialParams planner_theta;
  double gamma = 0.0;
  double cost_total = 0.0;
  double cost_tracking = 0.0;
  double cost_info = 0.0;
  double fim_trace = 0.0;
  double error_norm = 0.0;
  double solve_time = 0.0;
  int iterations = 0;
  PlanStatus plan_status = PlanStatus::kConverged;
  HealthStatus health = HealthStatus::kHealthy;
};

struct EpisodeLog {
  std::string name;
  double interval = 1.0;
  std::vector<EpisodeRow> rows;
  bool reached_goal = false;
  std::optional<double> arrival_time;
  double final_time = 0.0;
  RigidBodyState final_true_state;
  double terminal_error = 0.0;
  EstimatorBelief final_belief;
  InertialParams final_planner_theta;
  InertialParams true_params;
  Fim final_fim;
};

// The system being controlled. The harness only sees it through this
// interface, so nothing but the plant can read the true parameters.
class Plant {
 public:
  virtual ~Plant() = default;
  virtual RigidBodyState state() const = 0;
  virtual void apply(const ControlInput& u, double interval) = 0;
  virtual Measurement measure() = 0;
};

class SimulatedPlant : public Plant {
 public:
  SimulatedPlant(RigidBodyState x0, InertialParams true_params, NoiseSpec noise,
                 int substeps, DynamicsOptions opts = {});

  RigidBodyState state() const override { return x_; }
  void apply(const ControlInput& u, double interval) override;
  Measurement measure() override;

 private:
  RigidBodyState x_;
  InertialParams params_;
  NoiseSpec noise_;
  int substeps_;
  DynamicsOptions opts_;
  Rng rng_;
};

// Param-Plan loop: solve, apply the first input, measure, update the
// estimator, optionally adopt its mean, until the goal region has been held
// for goal_ticks consecutive ticks or duration_max elapses.
// The observer, when set, sees every horizon plan as it is solved.
using PlanObserver = std::function<void(std::size_t tick, double t, const HorizonPlan& plan)>;
EpisodeLog run_episode(const ScenarioConfig& cfg, const PlanObserver& observer = {});
EpisodeLog run_episode(const ScenarioConfig& cfg, Plant& plant,
                       const PlanObserver& observer = {});

struct EpisodeSummary {
  std::string name;
  std::size_t ticks = 0;
  bool reached_goal = false;
  std::optional<double> arrival_time;
  double final_time = 0.0;
  double terminal_error = 0.0;
  InertialParams final_theta_hat;
  Vector4 param_rel_error = Vector4::Zero();
  Vector4 param_std = Vector4::Zero();
  double cov_trace = 0.0;
  double cov_trace_inertia = 0.0;
  double inertia_rel_error_norm = 0.0;
  double integrated_u_norm = 0.0;
  Vector3 integrated_abs_torque = Vector3::Zero();
  double mean_solve_time = 0.0;
  double max_solve_time = 0.0;
  std::size_t degraded_ticks = 0;
  std::size_t unhealthy_ticks = 0;
};

EpisodeSummary summarize(const EpisodeLog& log);

struct ComparisonReport {
  EpisodeSummary a;
  EpisodeSummary b;
  EpisodeLog log_a;
  EpisodeLog log_b;
};

// Runs both episodes concurrently. The configurations may differ only in
// flags, seed and name.
ComparisonReport run_comparison(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b);

// Runs every configuration on a pool of jobs worker threads (0 = hardware
// concurrency); results keep the input order.
std::vector<EpisodeLog> run_batch(const std::vector<ScenarioConfig>& cfgs, unsigned jobs = 0);

}  // namespace infoplan

#endif  // INFOPLAN_CLOSED_LOOP_HPP_
