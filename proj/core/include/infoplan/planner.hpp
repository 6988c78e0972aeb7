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
#ifndef INFOPLAN_PLANNER_HPP_
#define INFOPLAN_PLANNER_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infoplan/dynamics.hpp"
#include "infoplan/fim.hpp"
#include "infoplan/sensitivity.hpp"

namespace infoplan {

inline constexpr int kErrorDim = 12;
using ErrorVector = Eigen::Matrix<double, kErrorDim, 1>;
using ErrorWeight = Eigen::Matrix<double, kErrorDim, kErrorDim>;
using InputWeight = Eigen::Matrix<double, kControlDim, kControlDim>;

struct GoalSpec {
  RigidBodyState target;
  // Radius of the goal region in combined error norm.
  double tolerance = 0.05;
};

// [r - r_g, vec(q * q_g^-1), v - v_g, w - w_g]. The quaternion error is
// sign-canonicalized so its scalar part is non-negative.
ErrorVector state_error(const RigidBodyState& x, const RigidBodyState& goal);

enum class GammaMode {
  kNorm,         // exp(-t / tau) + ||e||
  kSquaredNorm,  // exp(-t / tau) + ||e||^2
};

struct CostWeights {
  ErrorWeight q = default_q();
  InputWeight r = InputWeight::Zero();
  double ridge = 1e-3;
  double tau_decay = 10.0;
  GammaMode gamma_mode = GammaMode::kNorm;
  ParamMask info_mask = kAllParams;

  static ErrorWeight default_q();
  void validate() const;
};

struct ControlBounds {
  Vector6 lower = Vector6::Zero();
  Vector6 upper = Vector6::Zero();

  static ControlBounds symmetric(double force_max, double torque_max);
  static ControlBounds symmetric(const Vector3& force_max, const Vector3& torque_max);
  bool contains(const ControlInput& u) const;
  ControlInput clamp(const ControlInput& u) const;
  void validate() const;
};

struct PlannerConfig {
  int horizon = 40;
  double dt = 1.0;
  int substeps = 10;
  int max_iterations = 60;
  double grad_tolerance = 1e-6;
  double rel_cost_tolerance = 1e-9;
  double fd_relative_step = 1e-6;
  double momentum = 0.5;
  DynamicsOptions dynamics;

  void validate() const;
};

// Blends goal tracking against information gain: exp(-t / tau) plus the
// error norm (or its square).
double gamma_schedule(double t, const ErrorVector& x_err, const CostWeights& weights);

struct CostBreakdown {
  double total = 0.0;
  double tracking = 0.0;
  double info = 0.0;
};

// Everything the optimizer needs about one horizon.
struct PlanProblem {
  RigidBodyState x0;
  SensitivityMatrix phi0 = SensitivityMatrix::Zero();
  Fim fim_seed;
  InertialParams theta;
  GoalSpec goal;
  double t_now = 0.0;
  bool info_weighting = true;
  Vector6 sigma_meas = Vector6::Constant(1e-6);
};

// Rolls (x, phi) forward, accumulating the FIM per interval on top of
// fim_seed, and sums e^T Q e + u^T R u + gamma * a_optimality(F_i) over
// the N post-control states.
CostBreakdown horizon_cost(const std::vector<ControlInput>& controls, const PlanProblem& problem,
                           double gamma, const CostWeights& weights, const PlannerConfig& cfg);

enum class PlanStatus {
  kConverged,       // projected gradient below tolerance
  kStalled,         // relative decrease or line search exhausted
  kIterationLimit,  // iteration cap reached
  kDegraded,        // rollout diverged; zero-control fallback
};
std::string to_string(PlanStatus s);

struct HorizonPlan {
  std::vector<ControlInput> controls;
  std::vector<RigidBodyState> predicted_states;
  double cost_total = 0.0;
  double cost_tracking = 0.0;
  double cost_info = 0.0;
  double gamma_used = 0.0;
  double solve_time = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  PlanStatus status = PlanStatus::kConverged;
};

// Box-constrained descent over the 6N control values: spectral projected
// gradient with momentum and an accept-only-improvement Armijo search,
// forward-difference gradients. warm_start may be empty (zero plan).
HorizonPlan solve(const PlanProblem& problem, const CostWeights& weights,
                  const ControlBounds& bounds, const PlannerConfig& cfg,
                  const std::vector<ControlInput>& warm_start = {});

// Previous plan advanced by one interval with the last control repeated.
std::vector<ControlInput> shift_plan(const HorizonPlan& plan);

// First control of the plan; zero for degraded plans.
ControlInput receding_step(const HorizonPlan& plan);

}  // namespace infoplan

#endif  // INFOPLAN_PLANNER_HPP_
