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
#include "infoplan/closed_loop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

#include "infoplan/error.hpp"
#include "infoplan/sensitivity.hpp"

namespace infoplan {

void ScenarioConfig::validate() const {
  true_params.validate();
  initial_guess.validate();
  if (!(duration_max > 0.0)) throw InvalidArgument("duration_max must be positive");
  if (!(control_rate > 0.0)) throw InvalidArgument("control_rate must be positive");
  if (!(goal.tolerance > 0.0)) throw InvalidArgument("goal tolerance must be positive");
  if (plant_substeps < 1) throw InvalidArgument("plant_substeps must be at least 1");
  if (goal_ticks < 1) throw InvalidArgument("goal_ticks must be at least 1");
  if (!x0.all_finite() || std::abs(x0.q().norm() - 1.0) > 1e-9) {
    throw InvalidArgument("initial state must be finite with a unit quaternion");
  }
  if (!goal.target.all_finite() || std::abs(goal.target.q().norm() - 1.0) > 1e-9) {
    throw InvalidArgument("goal state must be finite with a unit quaternion");
  }
  if ((prior_log_std.array() <= 0.0).any()) throw InvalidArgument("prior_log_std must be positive");
  if (fusion_noise_std < 0.0) throw InvalidArgument("fusion_noise_std must be non-negative");
  if (fim_forgetting < 0.0) throw InvalidArgument("fim_forgetting must be non-negative");
  noise.validate();
  weights.validate();
  bounds.validate();
  planner.validate();
  ukf.validate();
}

SimulatedPlant::SimulatedPlant(RigidBodyState x0, InertialParams true_params, NoiseSpec noise,
                               int substeps, DynamicsOptions opts)
    : x_(std::move(x0)),
      params_(true_params),
      noise_(std::move(noise)),
      substeps_(substeps),
      opts_(opts),
      rng_(noise_.seed) {
  params_.validate();
  noise_.validate();
}

void SimulatedPlant::apply(const ControlInput& u, double interval) {
  x_ = integrate(x_, u, params_, interval, substeps_, opts_);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    const double n = normal(rng_);
    const double var = noise_.process_var[i];
    if (var > 0.0) x_.x[idx::kVel + i] += std::sqrt(var) * n;
  }
}

Measurement SimulatedPlant::measure() { return infoplan::measure(x_, noise_, rng_); }

namespace {

RigidBodyState fuse(const RigidBodyState& truth, double std_dev, Rng& rng) {
  if (std_dev == 0.0) return truth;
  std::normal_distribution<double> normal(0.0, std_dev);
  RigidBodyState out = truth;
  for (int i = 0; i < kStateDim; ++i) out.x[i] += normal(rng);
  out.q() /= out.q().norm();
  return out;
}

}  // namespace

EpisodeLog run_episode(const ScenarioConfig& cfg, const PlanObserver& observer) {
  cfg.validate();
  NoiseSpec noise = cfg.noise;
  noise.seed = cfg.seed;
  SimulatedPlant plant(cfg.x0, cfg.true_params, noise, cfg.plant_substeps,
                       cfg.planner.dynamics);
  return run_episode(cfg, plant, observer);
}

EpisodeLog run_episode(const ScenarioConfig& cfg, Plant& plant, const PlanObserver& observer) {
  // true_params belongs to the plant; nothing below may read it.
  ScenarioConfig checked = cfg;
  checked.true_params = cfg.initial_guess;
  checked.validate();

  const double dt = cfg.interval();
  const int max_ticks = static_cast<int>(std::floor(cfg.duration_max / dt + 1e-9));

  ParameterEstimator estimator(EstimatorBelief::from_guess(cfg.initial_guess, cfg.prior_log_std),
                               cfg.ukf);
  InertialParams planner_theta = cfg.initial_guess;
  SensitivityMatrix phi = SensitivityMatrix::Zero();
  Fim fim_history;
  std::vector<ControlInput> warm;
  Rng fusion_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  EpisodeLog log;
  log.name = cfg.name;
  log.interval = dt;
  log.rows.reserve(max_ticks);

  int inside = 0;
  int k = 0;
  for (; k < max_ticks; ++k) {
    const double t = k * dt;
    const RigidBodyState truth = plant.state();
    const RigidBodyState fused = fuse(truth, cfg.fusion_noise_std, fusion_rng);
    const double err = state_error(fused, cfg.goal.target).norm();
    inside = err <= cfg.goal.tolerance ? inside + 1 : 0;
    if (inside >= cfg.goal_ticks) {
      log.reached_goal = true;
      log.arrival_time = t;
      break;
    }

    PlanProblem problem;
    problem.x0 = fused;
    problem.phi0 = phi;
    problem.fim_seed = fim_history.scaled(cfg.fim_forgetting);
    problem.theta = planner_theta;
    problem.goal = cfg.goal;
    problem.t_now = t;
    problem.info_weighting = cfg.flags.info_weighting;
    problem.sigma_meas = cfg.ukf.sigma_meas;

    const HorizonPlan plan = solve(problem, cfg.weights, cfg.bounds, cfg.planner, warm);
    if (observer) observer(static_cast<std::size_t>(k), t, plan);
    const ControlInput u = receding_step(plan);
    warm = shift_plan(plan);

    plant.apply(u, dt);
    const Measurement y = plant.measure();

    HealthStatus health;
    try {
      health = estimator.update(fused, u, y, dt);
    } catch (const NumericalError&) {
      health = HealthStatus::kUnhealthy;
    }

    const JointState js = propagate_joint_interval(fused, phi, u, planner_theta, dt,
                                                   cfg.planner.substeps, cfg.planner.dynamics);
    phi = js.phi;
    fim_history = fim_history.accumulate(output_sensitivity(phi), cfg.ukf.sigma_meas);

    EpisodeRow row;
    row.t = t;
    row.true_state = truth;
    row.fused_state = fused;
    row.u = u;
    row.theta_hat = estimator.belief().theta_hat();
    row.p_diag = estimator.belief().p.diagonal();
    row.planner_theta = planner_theta;
    row.gamma = plan.gamma_used;
    row.cost_total = plan.cost_total;
    row.cost_tracking = plan.cost_tracking;
    row.cost_info = plan.cost_info;
    row.fim_trace = fim_history.trace();
    row.error_norm = err;
    row.solve_time = plan.solve_time;
    row.iterations = plan.iterations;
    row.plan_status = plan.status;
    row.health = health;
    log.rows.push_back(row);

    if (cfg.flags.param_updates && health == HealthStatus::kHealthy) {
      planner_theta = estimator.belief().theta_hat();
    }
  }

  log.final_time = k * dt;
  log.final_true_state = plant.state();
  log.terminal_error = state_error(log.final_true_state, cfg.goal.target).norm();
  log.final_belief = estimator.belief();
  log.final_planner_theta = planner_theta;
  log.true_params = cfg.true_params;
  log.final_fim = fim_history;
  return log;
}

EpisodeSummary summarize(const EpisodeLog& log) {
  EpisodeSummary s;
  s.name = log.name;
  s.ticks = log.rows.size();
  s.reached_goal = log.reached_goal;
  s.arrival_time = log.arrival_time;
  s.final_time = log.final_time;
  s.terminal_error = log.terminal_error;
  s.final_theta_hat = log.final_belief.theta_hat();
  const Vector4 est = s.final_theta_hat.as_vector();
  const Vector4 truth = log.true_params.as_vector();
  s.param_rel_error = (est - truth).cwiseQuotient(truth).cwiseAbs();
  s.param_std = log.final_belief.physical_std();
  s.cov_trace = s.param_std.squaredNorm();
  s.cov_trace_inertia = s.param_std.tail<3>().squaredNorm();
  s.inertia_rel_error_norm = s.param_rel_error.tail<3>().norm();
  double solve_sum = 0.0;
  for (const EpisodeRow& r : log.rows) {
    s.integrated_u_norm += r.u.as_vector().norm() * log.interval;
    s.integrated_abs_torque += r.u.torque.cwiseAbs() * log.interval;
    solve_sum += r.solve_time;
    s.max_solve_time = std::max(s.max_solve_time, r.solve_time);
    if (r.plan_status == PlanStatus::kDegraded) ++s.degraded_ticks;
    if (r.health == HealthStatus::kUnhealthy) ++s.unhealthy_ticks;
  }
  if (!log.rows.empty()) s.mean_solve_time = solve_sum / static_cast<double>(log.rows.size());
  return s;
}

namespace {

void require_comparable(const ScenarioConfig& a, const ScenarioConfig& b) {
  const bool same = a.true_params == b.true_params && a.initial_guess == b.initial_guess &&
                    a.prior_log_std == b.prior_log_std && a.x0 == b.x0 &&
                    a.goal.target == b.goal.target && a.goal.tolerance == b.goal.tolerance &&
                    a.duration_max == b.duration_max && a.control_rate == b.control_rate &&
                    a.plant_substeps == b.plant_substeps &&
                    a.planner.horizon == b.planner.horizon &&
                    a.bounds.lower == b.bounds.lower && a.bounds.upper == b.bounds.upper &&
                    a.weights.q == b.weights.q && a.weights.r == b.weights.r &&
                    a.noise.measurement_var == b.noise.measurement_var;
  if (!same) {
    throw InvalidArgument("run_comparison: configurations may differ only in flags and seed");
  }
}

}  // namespace

ComparisonReport run_comparison(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b) {
  require_comparable(cfg_a, cfg_b);
  auto fut = std::async(std::launch::async, [&cfg_b] { return run_episode(cfg_b); });
  ComparisonReport report;
  report.log_a = run_episode(cfg_a);
  report.log_b = fut.get();
  report.a = summarize(report.log_a);
  report.b = summarize(report.log_b);
  return report;
}

std::vector<EpisodeLog> run_batch(const std::vector<ScenarioConfig>& cfgs, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(cfgs.size(), 1));
  std::vector<EpisodeLog> out(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        out[i] = run_episode(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace infoplan
