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
#include "infoplan/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "infoplan/closed_loop.hpp"
#include "infoplan/error.hpp"
#include "infoplan/fim.hpp"
#include "infoplan/planner.hpp"
#include "infoplan/reporting.hpp"
#include "infoplan/sensitivity.hpp"
#include "infoplan/ukf.hpp"

namespace infoplan {
namespace {

const InertialParams kBody{9.7, 7.0, 7.0, 10.0};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

RigidBodyState tumbling() {
  return RigidBodyState::from(Vector3::Zero(), quat::from_axis_angle(Vector3(1, 2, 3), 0.4),
                              Vector3::Zero(), Vector3(0.3, -0.2, 0.5));
}

// RK4 with renormalization over an arbitrary derivative.
StateVector rk4(const DerivativeFn& f, StateVector x, const InertialParams& th, double dt,
                int steps) {
  const Vector6 u = Vector6::Zero();
  StateVector k1, k2, k3, k4;
  for (int i = 0; i < steps; ++i) {
    f(x, u, th, k1);
    f(x + 0.5 * dt * k1, u, th, k2);
    f(x + 0.5 * dt * k2, u, th, k3);
    f(x + dt * k3, u, th, k4);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x.segment<4>(idx::kQuat).normalize();
  }
  return x;
}

RigidBodyState random_state(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vector3 axis(u(rng), u(rng), u(rng));
  return RigidBodyState::from(Vector3(u(rng), u(rng), u(rng)),
                              quat::from_axis_angle(axis.normalized(), 3.0 * u(rng)),
                              0.1 * Vector3(u(rng), u(rng), u(rng)),
                              0.2 * Vector3(u(rng), u(rng), u(rng)));
}

ControlInput random_input(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {0.4 * Vector3(u(rng), u(rng), u(rng)), 0.1 * Vector3(u(rng), u(rng), u(rng))};
}

SelftestCheck quaternion_norm() {
  Rng rng(11);
  RigidBodyState x = random_state(rng);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    x = step(x, random_input(rng), kBody, 0.05);
    worst = std::max(worst, std::abs(x.q().norm() - 1.0));
  }
  return {"quaternion_unit_norm", worst <= 1e-9, fmt("max | |q| - 1 | = %.3e", worst)};
}

SelftestCheck step_determinism() {
  Rng rng(12);
  const RigidBodyState x = random_state(rng);
  const ControlInput u = random_input(rng);
  const bool same = step(x, u, kBody, 0.1) == step(x, u, kBody, 0.1);
  return {"step_determinism", same, same ? "bit-identical" : "outputs differ"};
}

SelftestCheck rk4_order() {
  const RigidBodyState x0 = tumbling();
  const ControlInput u{Vector3(0.2, 0.1, -0.1), Vector3(0.05, -0.03, 0.02)};
  const double T = 4.0;
  const auto ref = integrate(x0, u, kBody, T, 160);
  const double e1 = (integrate(x0, u, kBody, T, 20).x - ref.x).norm();
  const double e2 = (integrate(x0, u, kBody, T, 40).x - ref.x).norm();
  const double ratio = e1 / e2;
  return {"rk4_order", ratio >= 8.0, fmt("error ratio on halving dt = %.2f", ratio)};
}

SelftestCheck sensitivity_vs_fd() {
  Rng rng(13);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const RigidBodyState x0 = random_state(rng);
    std::vector<ControlInput> us;
    for (int k = 0; k < 5; ++k) us.push_back(random_input(rng));
    JointState js{x0, SensitivityMatrix::Zero()};
    for (const auto& u : us) js = propagate_joint_interval(js.x, js.phi, u, kBody, 1.0, 50);
    for (int j = 0; j < kParamDim; ++j) {
      const double h = 1e-4 * kBody.as_vector()[j];
      auto run = [&](double sign) {
        Vector4 p = kBody.as_vector();
        p[j] += sign * h;
        RigidBodyState x = x0;
        for (const auto& u : us) x = integrate(x, u, InertialParams::from_vector(p), 1.0, 50);
        return x.x;
      };
      const StateVector fd = (run(1.0) - run(-1.0)) / (2.0 * h);
      for (int i = 0; i < kStateDim; ++i) {
        const double err = std::abs(js.phi(i, j) - fd[i]) / (std::abs(fd[i]) + 1e-4);
        worst = std::max(worst, err);
      }
    }
  }
  return {"sensitivity_vs_finite_difference", worst <= 1e-4,
          fmt("worst relative error %.3e", worst)};
}

SelftestCheck fim_psd() {
  Rng rng(14);
  Fim f;
  double worst = 0.0;
  JointState js{random_state(rng), SensitivityMatrix::Zero()};
  for (int k = 0; k < 20; ++k) {
    js = propagate_joint_interval(js.x, js.phi, random_input(rng), kBody, 1.0, 10);
    f = f.accumulate(output_sensitivity(js.phi), Vector6::Constant(1e-6));
    worst = std::min(worst, f.min_eigenvalue() / std::max(1.0, f.trace()));
  }
  return {"fim_positive_semidefinite", worst >= -1e-10,
          fmt("min eigenvalue / trace = %.3e", worst)};
}

SelftestCheck zero_information() {
  JointState js{RigidBodyState::at_rest(), SensitivityMatrix::Zero()};
  Fim f;
  const ControlInput u{Vector3(0.3, -0.2, 0.1), Vector3::Zero()};
  for (int k = 0; k < 10; ++k) {
    js = propagate_joint_interval(js.x, js.phi, u, kBody, 1.0, 10);
    f = f.accumulate(output_sensitivity(js.phi), Vector6::Constant(1e-6));
  }
  const bool zero = f.matrix().bottomRows<3>().isZero(0.0) && f.matrix().rightCols<3>().isZero(0.0);
  return {"zero_information_without_rotation", zero && f.matrix()(0, 0) > 0.0,
          fmt("mass information %.3e", f.matrix()(0, 0))};
}

SelftestCheck a_optimality_decreasing() {
  Rng rng(15);
  JointState js{random_state(rng), SensitivityMatrix::Zero()};
  Fim f;
  double prev = a_optimality(f, 1e-3);
  bool ok = true;
  for (int k = 0; k < 10; ++k) {
    js = propagate_joint_interval(js.x, js.phi, random_input(rng), kBody, 1.0, 10);
    f = f.accumulate(output_sensitivity(js.phi), Vector6::Constant(1e-6));
    const double a = a_optimality(f, 1e-3);
    ok = ok && a < prev;
    prev = a;
  }
  return {"a_optimality_strictly_decreasing", ok, fmt("final value %.3e", prev)};
}

SelftestCheck sigma_weights_sum() {
  const UkfConfig cfg;
  const SigmaWeights w = sigma_weights(cfg);
  const double sum = w.mean0 + 2 * kParamDim * w.rest;
  const double cov_gap = w.cov0 - (w.mean0 + 1.0 - cfg.alpha * cfg.alpha + cfg.beta);
  const bool ok = std::abs(sum - 1.0) <= 1e-12 && std::abs(cov_gap) <= 1e-12;
  return {"sigma_weights_consistent", ok, fmt("sum of mean weights - 1 = %.3e", sum - 1.0)};
}

SelftestCheck ukf_contraction() {
  UkfConfig cfg;
  cfg.q_theta.setZero();
  cfg.substeps = 20;
  EstimatorBelief b = EstimatorBelief::from_guess({10.0, 6.0, 8.0, 9.0}, Vector4::Constant(0.3));
  Rng rng(16);
  RigidBodyState x = tumbling();
  bool ok = true;
  NoiseSpec noise;
  noise.measurement_var = cfg.sigma_meas;
  noise.seed = 16;
  for (int k = 0; k < 10; ++k) {
    const ControlInput u = random_input(rng);
    const RigidBodyState next = integrate(x, u, kBody, 1.0, cfg.substeps);
    const Measurement y = measure(next, noise, rng);
    const EstimatorBelief nb = ukf_update(b, x, u, y, 1.0, cfg);
    ok = ok && nb.p.trace() <= b.p.trace();
    b = nb;
    x = next;
  }
  return {"ukf_covariance_contraction", ok, fmt("final trace(P) %.3e", b.p.trace())};
}

SelftestCheck ukf_positive() {
  UkfConfig cfg;
  cfg.substeps = 10;
  EstimatorBelief b = EstimatorBelief::from_guess(kBody, Vector4::Constant(1.0));
  Rng rng(17);
  std::normal_distribution<double> wild(0.0, 5.0);
  bool ok = true;
  for (int k = 0; k < 10; ++k) {
    const RigidBodyState x = random_state(rng);
    Measurement y{Vector3(wild(rng), wild(rng), wild(rng)), Vector3(wild(rng), wild(rng), wild(rng))};
    try {
      b = ukf_update(b, x, random_input(rng), y, 1.0, cfg);
    } catch (const NumericalError&) {
      continue;  // rejected updates leave the belief as it was
    }
    const Vector4 th = b.theta_hat().as_vector();
    ok = ok && th.allFinite() && (th.array() > 0.0).all();
  }
  return {"ukf_estimates_positive", ok, ok ? "all estimates > 0" : "non-positive estimate"};
}

SelftestCheck ukf_unobservable() {
  UkfConfig cfg;
  cfg.q_theta.setZero();
  cfg.substeps = 20;
  const EstimatorBelief prior =
      EstimatorBelief::from_guess({12.0, 5.0, 9.0, 12.0}, Vector4::Constant(0.4));
  EstimatorBelief b = prior;
  RigidBodyState x = RigidBodyState::at_rest();
  const ControlInput u{Vector3(0.2, 0.1, -0.1), Vector3::Zero()};
  for (int k = 0; k < 10; ++k) {
    const RigidBodyState next = integrate(x, u, kBody, 1.0, cfg.substeps);
    b = ukf_update(b, x, u, {next.v(), next.w()}, 1.0, cfg);
    x = next;
  }
  const double dm = (b.log_mean.tail<3>() - prior.log_mean.tail<3>()).cwiseAbs().maxCoeff();
  const double dp = ((b.p.bottomRightCorner<3, 3>() - prior.p.bottomRightCorner<3, 3>())
                         .cwiseAbs().array() / prior.p.bottomRightCorner<3, 3>().cwiseAbs().maxCoeff())
                        .maxCoeff();
  const bool mass_learned = b.p(0, 0) < prior.p(0, 0);
  return {"ukf_inertia_unobservable_without_rotation", dm <= 1e-8 && dp <= 1e-8 && mass_learned,
          fmt("inertia mean shift %.3e, covariance shift %.3e", dm, dp)};
}

PlanProblem toy_problem() {
  PlanProblem p;
  p.x0 = RigidBodyState::from(Vector3(0.5, -0.3, 0.2), quat::from_axis_angle(Vector3::UnitZ(), 0.3),
                              Vector3::Zero(), Vector3::Zero());
  p.theta = kBody;
  return p;
}

PlannerConfig toy_planner() {
  PlannerConfig c;
  c.horizon = 3;
  c.max_iterations = 15;
  return c;
}

SelftestCheck planner_bounds_monotone() {
  const PlanProblem p = toy_problem();
  const CostWeights w;
  const ControlBounds bounds = ControlBounds::symmetric(0.4, 0.1);
  const PlannerConfig cfg = toy_planner();
  const std::vector<ControlInput> warm(cfg.horizon, ControlInput{Vector3(0.1, 0.0, 0.0), Vector3(0.0, 0.0, 0.05)});
  const double gamma = gamma_schedule(p.t_now, state_error(p.x0, p.goal.target), w);
  const double warm_cost = horizon_cost(warm, p, gamma, w, cfg).total;
  const HorizonPlan plan = solve(p, w, bounds, cfg, warm);
  bool inside = true;
  for (const auto& u : plan.controls) inside = inside && bounds.contains(u);
  const bool ok = inside && plan.cost_total <= warm_cost;
  return {"planner_bounds_and_monotone_cost", ok,
          fmt("warm cost %.6g, solved cost %.6g", warm_cost, plan.cost_total)};
}

SelftestCheck gamma_zero_is_tracking() {
  const PlanProblem p = toy_problem();
  const CostWeights w;
  const std::vector<ControlInput> u(3, ControlInput{Vector3(0.1, -0.2, 0.0), Vector3(0.0, 0.05, 0.0)});
  const CostBreakdown c = horizon_cost(u, p, 0.0, w, toy_planner());
  return {"gamma_zero_reduces_to_tracking", c.total == c.tracking,
          fmt("total %.17g, tracking %.17g", c.total, c.tracking)};
}

SelftestCheck gamma_schedule_shape() {
  const CostWeights w;
  const ErrorVector zero = ErrorVector::Zero();
  const ErrorVector some = ErrorVector::Constant(0.1);
  bool decreasing = true;
  for (double t = 0.0; t < 60.0; t += 0.5) {
    decreasing = decreasing && gamma_schedule(t + 0.5, some, w) < gamma_schedule(t, some, w);
  }
  const double g0 = gamma_schedule(0.0, zero, w);
  const double g5 = gamma_schedule(5.0 * w.tau_decay, zero, w);
  return {"gamma_schedule_decay", decreasing && g0 == 1.0 && g5 < 0.01,
          fmt("gamma(0,0) = %.6g, gamma(5 tau,0) = %.3e", g0, g5)};
}

ScenarioConfig tiny_scenario() {
  ScenarioConfig c;
  c.name = "selftest";
  c.x0 = RigidBodyState::from(Vector3(0.4, 0.0, 0.0), Vector4(0, 0, 0, 1), Vector3::Zero(),
                              Vector3::Zero());
  c.duration_max = 3.0;
  c.planner.horizon = 3;
  c.planner.max_iterations = 5;
  c.ukf.substeps = 10;
  c.plant_substeps = 10;
  c.noise.measurement_var = c.ukf.sigma_meas;
  c.seed = 5;
  return c;
}

SelftestCheck episode_determinism() {
  const ScenarioConfig c = tiny_scenario();
  std::ostringstream a, b;
  write_episode_csv(a, run_episode(c));
  write_episode_csv(b, run_episode(c));
  const bool same = a.str() == b.str();
  return {"episode_determinism", same, same ? "identical CSV" : "CSV differs between runs"};
}

SelftestCheck csv_round_trip() {
  const EpisodeLog log = run_episode(tiny_scenario());
  std::stringstream ss;
  write_episode_csv(ss, log);
  const auto rows = read_episode_csv(ss);
  bool same = rows.size() == log.rows.size();
  for (std::size_t i = 0; same && i < rows.size(); ++i) {
    const EpisodeRow& a = rows[i];
    const EpisodeRow& b = log.rows[i];
    same = a.t == b.t && a.true_state == b.true_state && a.fused_state == b.fused_state &&
           a.u == b.u && a.theta_hat == b.theta_hat && a.p_diag == b.p_diag &&
           a.planner_theta == b.planner_theta && a.gamma == b.gamma &&
           a.cost_total == b.cost_total && a.cost_tracking == b.cost_tracking &&
           a.cost_info == b.cost_info && a.fim_trace == b.fim_trace &&
           a.error_norm == b.error_norm && a.iterations == b.iterations &&
           a.plan_status == b.plan_status && a.health == b.health;
  }
  return {"csv_round_trip", same, std::to_string(rows.size()) + " rows"};
}

SelftestCheck guarded(const char* name, SelftestCheck (*fn)()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

bool SelftestReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

std::string SelftestReport::format() const {
  std::string out;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    out += std::string(c.passed ? "PASS " : "FAIL ") + c.name + "  (" + c.detail + ")\n";
    passed += c.passed ? 1 : 0;
  }
  out += std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return out;
}

DerivativeFn library_derivative() {
  return [](const StateVector& x, const Vector6& u, const InertialParams& th, StateVector& xdot) {
    detail::deriv_unchecked(x, u, th, DynamicsOptions{}, xdot);
  };
}

SelftestCheck check_momentum_conservation(const DerivativeFn& f) {
  const InertialParams th{9.7, 7.0, 7.0, 10.0};
  const RigidBodyState x0 = tumbling();
  RigidBodyState x1;
  x1.x = rk4(f, x0.x, th, 0.01, 1000);
  const Vector3 l0 = angular_momentum_inertial(x0, th);
  const double rel = (angular_momentum_inertial(x1, th) - l0).norm() / l0.norm();
  return {"angular_momentum_conservation", rel <= 1e-6, fmt("relative drift %.3e", rel)};
}

SelftestCheck check_energy_conservation(const DerivativeFn& f) {
  const InertialParams th{9.7, 7.0, 7.0, 10.0};
  const RigidBodyState x0 = tumbling();
  RigidBodyState x1;
  x1.x = rk4(f, x0.x, th, 0.01, 1000);
  const double e0 = rotational_energy(x0, th);
  const double rel = std::abs(rotational_energy(x1, th) - e0) / e0;
  return {"kinetic_energy_conservation", rel <= 1e-6, fmt("relative drift %.3e", rel)};
}

SelftestReport selftest() {
  SelftestReport r;
  const DerivativeFn f = library_derivative();
  try {
    r.checks.push_back(check_momentum_conservation(f));
    r.checks.push_back(check_energy_conservation(f));
  } catch (const std::exception& e) {
    r.checks.push_back({"conservation", false, std::string("threw: ") + e.what()});
  }
  r.checks.push_back(guarded("quaternion_unit_norm", quaternion_norm));
  r.checks.push_back(guarded("step_determinism", step_determinism));
  r.checks.push_back(guarded("rk4_order", rk4_order));
  r.checks.push_back(guarded("sensitivity_vs_finite_difference", sensitivity_vs_fd));
  r.checks.push_back(guarded("fim_positive_semidefinite", fim_psd));
  r.checks.push_back(guarded("zero_information_without_rotation", zero_information));
  r.checks.push_back(guarded("a_optimality_strictly_decreasing", a_optimality_decreasing));
  r.checks.push_back(guarded("sigma_weights_consistent", sigma_weights_sum));
  r.checks.push_back(guarded("ukf_covariance_contraction", ukf_contraction));
  r.checks.push_back(guarded("ukf_estimates_positive", ukf_positive));
  r.checks.push_back(guarded("ukf_inertia_unobservable_without_rotation", ukf_unobservable));
  r.checks.push_back(guarded("planner_bounds_and_monotone_cost", planner_bounds_monotone));
  r.checks.push_back(guarded("gamma_zero_reduces_to_tracking", gamma_zero_is_tracking));
  r.checks.push_back(guarded("gamma_schedule_decay", gamma_schedule_shape));
  r.checks.push_back(guarded("episode_determinism", episode_determinism));
  r.checks.push_back(guarded("csv_round_trip", csv_round_trip));
  return r;
}

}  // namespace infoplan
