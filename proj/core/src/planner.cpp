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
#include "infoplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "infoplan/error.hpp"

namespace infoplan {

ErrorVector state_error(const RigidBodyState& x, const RigidBodyState& goal) {
  ErrorVector e;
  e.segment<3>(0) = x.r() - goal.r();
  Vector4 dq = quat::multiply(x.q(), quat::conjugate(goal.q()));
  if (dq[3] < 0.0) dq = -dq;
  e.segment<3>(3) = dq.head<3>();
  e.segment<3>(6) = x.v() - goal.v();
  e.segment<3>(9) = x.w() - goal.w();
  return e;
}

ErrorWeight CostWeights::default_q() {
  ErrorVector d;
  d << 10, 10, 10, 10, 10, 10, 1, 1, 1, 1, 1, 1;
  return d.asDiagonal();
}

void CostWeights::validate() const {
  auto psd = [](const auto& m) {
    if (!m.allFinite()) return false;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
      return false;
    }
    using M = std::decay_t<decltype(m)>;
    Eigen::SelfAdjointEigenSolver<M> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-12;
  };
  if (!psd(q)) throw InvalidArgument("state weight Q must be symmetric positive semidefinite");
  if (!psd(r)) throw InvalidArgument("input weight R must be symmetric positive semidefinite");
  if (!(ridge > 0.0)) throw InvalidArgument("FIM ridge must be positive");
  if (!(tau_decay > 0.0)) throw InvalidArgument("gamma decay constant must be positive");
}

ControlBounds ControlBounds::symmetric(double force_max, double torque_max) {
  return symmetric(Vector3::Constant(force_max), Vector3::Constant(torque_max));
}

ControlBounds ControlBounds::symmetric(const Vector3& force_max, const Vector3& torque_max) {
  ControlBounds b;
  b.upper << force_max, torque_max;
  b.lower = -b.upper;
  b.validate();
  return b;
}

bool ControlBounds::contains(const ControlInput& u) const {
  const Vector6 v = u.as_vector();
  return (v.array() >= lower.array()).all() && (v.array() <= upper.array()).all();
}

ControlInput ControlBounds::clamp(const ControlInput& u) const {
  return ControlInput::from_vector(u.as_vector().cwiseMax(lower).cwiseMin(upper));
}

void ControlBounds::validate() const {
  if (!lower.allFinite() || !upper.allFinite() || (lower.array() > upper.array()).any()) {
    throw InvalidArgument("control bounds must be finite with lower <= upper");
  }
}

void PlannerConfig::validate() const {
  if (horizon < 1) throw InvalidArgument("planner horizon must be at least 1");
  if (!(dt > 0.0)) throw InvalidArgument("planner interval must be positive");
  if (substeps < 1) throw InvalidArgument("planner substeps must be at least 1");
  if (max_iterations < 0) throw InvalidArgument("planner iteration cap must be non-negative");
  if (!(fd_relative_step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw InvalidArgument("momentum must lie in [0, 1)");
}

double gamma_schedule(double t, const ErrorVector& x_err, const CostWeights& weights) {
  if (t < 0.0) throw InvalidArgument("gamma_schedule: time must be non-negative");
  const double decay = std::exp(-t / weights.tau_decay);
  const double n = x_err.norm();
  return decay + (weights.gamma_mode == GammaMode::kNorm ? n : n * n);
}

std::string to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kConverged: return "converged";
    case PlanStatus::kStalled: return "stalled";
    case PlanStatus::kIterationLimit: return "iteration_limit";
    case PlanStatus::kDegraded: return "degraded";
  }
  return "unknown";
}

namespace {

using Eigen::VectorXd;

// Cached rollout of one horizon. Node k holds the joint state before
// control k is applied, together with the FIM and the cost accumulated
// over stages 1..k, so a perturbation of control k only needs intervals
// k..N-1 to be re-simulated.
class HorizonRollout {
 public:
  HorizonRollout(const PlanProblem& problem, double gamma, const CostWeights& weights,
                 const PlannerConfig& cfg)
      : problem_(problem),
        gamma_(gamma),
        weights_(weights),
        cfg_(cfg),
        with_info_(gamma != 0.0),
        inv_sigma_(problem.sigma_meas.cwiseInverse()),
        sub_dt_(cfg.dt / cfg.substeps),
        nodes_(cfg.horizon + 1) {}

  // Cost of the full horizon; refreshes the cache.
  CostBreakdown evaluate(const VectorXd& u) {
    Node& n0 = nodes_[0];
    n0.x = problem_.x0.x;
    n0.phi = problem_.phi0;
    n0.fim = problem_.fim_seed.matrix();
    n0.tracking = 0.0;
    n0.info = 0.0;
    for (int k = 0; k < cfg_.horizon; ++k) {
      nodes_[k + 1] = nodes_[k];
      advance(nodes_[k + 1], u.segment<kControlDim>(kControlDim * k));
    }
    const Node& last = nodes_[cfg_.horizon];
    return {last.tracking + gamma_ * last.info, last.tracking, last.info};
  }

  // Total cost for u, reusing cached prefix nodes 0..k (u must agree with
  // the cached controls before index k).
  double evaluate_from(const VectorXd& u, int k) const {
    Node n = nodes_[k];
    for (int j = k; j < cfg_.horizon; ++j) advance(n, u.segment<kControlDim>(kControlDim * j));
    return n.tracking + gamma_ * n.info;
  }

  std::vector<RigidBodyState> states() const {
    std::vector<RigidBodyState> out(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) out[i].x = nodes_[i].x;
    return out;
  }

 private:
  struct Node {
    StateVector x;
    SensitivityMatrix phi;
    FimMatrix fim;
    double tracking = 0.0;
    double info = 0.0;
  };

  void advance(Node& n, const Vector6& u) const {
    if (with_info_) {
      for (int s = 0; s < cfg_.substeps; ++s) {
        detail::joint_step(n.x, n.phi, u, problem_.theta, sub_dt_, cfg_.dynamics);
      }
      detail::accumulate_into(n.fim, output_sensitivity(n.phi), inv_sigma_);
      n.info += detail::a_optimality_unchecked(n.fim, weights_.ridge, weights_.info_mask);
    } else {
      RigidBodyState s;
      s.x = n.x;
      for (int i = 0; i < cfg_.substeps; ++i) s.x = step_unchecked(s.x, u);
      n.x = s.x;
    }
    RigidBodyState xs;
    xs.x = n.x;
    const ErrorVector e = state_error(xs, problem_.goal.target);
    n.tracking += e.dot(weights_.q * e) + u.dot(weights_.r * u);
  }

  StateVector step_unchecked(const StateVector& x, const Vector6& u) const {
    const double half = 0.5 * sub_dt_;
    const double sixth = sub_dt_ / 6.0;
    StateVector k1, k2, k3, k4, tmp;
    detail::deriv_unchecked(x, u, problem_.theta, cfg_.dynamics, k1);
    tmp = x + half * k1;
    detail::deriv_unchecked(tmp, u, problem_.theta, cfg_.dynamics, k2);
    tmp = x + half * k2;
    detail::deriv_unchecked(tmp, u, problem_.theta, cfg_.dynamics, k3);
    tmp = x + sub_dt_ * k3;
    detail::deriv_unchecked(tmp, u, problem_.theta, cfg_.dynamics, k4);
    StateVector out = x + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.segment<4>(idx::kQuat) /= out.segment<4>(idx::kQuat).norm();
    return out;
  }

  const PlanProblem& problem_;
  double gamma_;
  const CostWeights& weights_;
  const PlannerConfig& cfg_;
  bool with_info_;
  Vector6 inv_sigma_;
  double sub_dt_;
  std::vector<Node> nodes_;
};

VectorXd flatten(const std::vector<ControlInput>& controls) {
  VectorXd u(kControlDim * controls.size());
  for (std::size_t k = 0; k < controls.size(); ++k) {
    u.segment<kControlDim>(kControlDim * k) = controls[k].as_vector();
  }
  return u;
}

std::vector<ControlInput> unflatten(const VectorXd& u) {
  std::vector<ControlInput> out(u.size() / kControlDim);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = ControlInput::from_vector(u.segment<kControlDim>(kControlDim * k));
  }
  return out;
}

void validate_problem(const PlanProblem& p) {
  p.theta.validate();
  if (!p.x0.all_finite() || !p.phi0.allFinite()) {
    throw InvalidArgument("plan problem has a non-finite initial state or sensitivity");
  }
  if ((p.sigma_meas.array() <= 0.0).any()) {
    throw InvalidArgument("plan problem measurement covariance must be positive");
  }
}

}  // namespace

CostBreakdown horizon_cost(const std::vector<ControlInput>& controls, const PlanProblem& problem,
                           double gamma, const CostWeights& weights, const PlannerConfig& cfg) {
  cfg.validate();
  weights.validate();
  validate_problem(problem);
  if (controls.empty()) throw InvalidArgument("horizon_cost: empty control sequence");
  PlannerConfig local = cfg;
  local.horizon = static_cast<int>(controls.size());
  // A nonzero weight forces the sensitivities to be carried so the info
  // term is reported even when gamma is zero.
  HorizonRollout rollout(problem, gamma == 0.0 ? 1.0 : gamma, weights, local);
  const CostBreakdown b = rollout.evaluate(flatten(controls));
  const CostBreakdown c{b.tracking + gamma * b.info, b.tracking, b.info};
  if (!std::isfinite(c.total) || !std::isfinite(c.tracking) || !std::isfinite(c.info)) {
    throw NumericalError("horizon_cost: rollout produced a non-finite cost");
  }
  return c;
}

HorizonPlan solve(const PlanProblem& problem, const CostWeights& weights,
                  const ControlBounds& bounds, const PlannerConfig& cfg,
                  const std::vector<ControlInput>& warm_start) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  weights.validate();
  bounds.validate();
  validate_problem(problem);
  if (!warm_start.empty() && static_cast<int>(warm_start.size()) != cfg.horizon) {
    throw InvalidArgument("warm start length " + std::to_string(warm_start.size()) +
                          " does not match horizon " + std::to_string(cfg.horizon));
  }

  const int n = kControlDim * cfg.horizon;
  const double gamma =
      problem.info_weighting
          ? gamma_schedule(problem.t_now, state_error(problem.x0, problem.goal.target), weights)
          : 0.0;

  // Work in normalized coordinates z in [-1, 1]: u = mid + half * z.
  VectorXd mid(n), half(n);
  for (int k = 0; k < cfg.horizon; ++k) {
    mid.segment<kControlDim>(kControlDim * k) = 0.5 * (bounds.lower + bounds.upper);
    half.segment<kControlDim>(kControlDim * k) = 0.5 * (bounds.upper - bounds.lower);
  }
  std::vector<int> free;
  for (int i = 0; i < n; ++i) {
    if (half[i] > 0.0) free.push_back(i);
  }
  auto to_u = [&](const VectorXd& z) { return VectorXd(mid + half.cwiseProduct(z)); };
  auto project = [](VectorXd z) { return VectorXd(z.cwiseMax(-1.0).cwiseMin(1.0)); };

  VectorXd z = VectorXd::Zero(n);
  if (!warm_start.empty()) {
    const VectorXd u0 = flatten(warm_start);
    for (int i : free) z[i] = (u0[i] - mid[i]) / half[i];
  } else {
    for (int i : free) z[i] = -mid[i] / half[i];
  }
  z = project(z);

  HorizonRollout rollout(problem, gamma, weights, cfg);
  HorizonPlan plan;
  plan.gamma_used = gamma;

  auto degraded = [&]() {
    HorizonPlan fb;
    fb.gamma_used = gamma;
    fb.status = PlanStatus::kDegraded;
    fb.controls.assign(cfg.horizon, ControlInput::zero());
    fb.predicted_states.assign(cfg.horizon + 1, problem.x0);
    fb.cost_total = fb.cost_tracking = fb.cost_info = std::numeric_limits<double>::quiet_NaN();
    fb.solve_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return fb;
  };

  double cost = rollout.evaluate(to_u(z)).total;
  if (!std::isfinite(cost)) return degraded();

  // Forward-difference gradient with respect to z; relies on the rollout
  // cache holding the nodes of the point z.
  auto gradient = [&](const VectorXd& zc, double base) {
    VectorXd g = VectorXd::Zero(n);
    VectorXd u = to_u(zc);
    for (int i : free) {
      const double h = cfg.fd_relative_step * std::max(std::abs(u[i]), half[i]);
      const double saved = u[i];
      u[i] = saved + h;
      const double c = rollout.evaluate_from(u, i / kControlDim);
      u[i] = saved;
      g[i] = (c - base) / h * half[i];
    }
    return g;
  };
  // Projected gradient in physical units (cost per N or N m).
  auto projected_norm = [&](const VectorXd& zc, const VectorXd& gz) {
    double m = 0.0;
    for (int i : free) {
      const double g = gz[i] / half[i];
      if ((zc[i] <= -1.0 && g > 0.0) || (zc[i] >= 1.0 && g < 0.0)) continue;
      m = std::max(m, std::abs(g));
    }
    return m;
  };

  VectorXd g = gradient(z, cost);
  if (!g.allFinite()) return degraded();

  double alpha = 0.25 / std::max(g.cwiseAbs().maxCoeff(), 1e-12);
  VectorXd z_prev = z;
  plan.status = PlanStatus::kIterationLimit;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    plan.projected_gradient_norm = projected_norm(z, g);
    if (plan.projected_gradient_norm < cfg.grad_tolerance) {
      plan.status = PlanStatus::kConverged;
      break;
    }

    VectorXd mom = cfg.momentum * (z - z_prev);
    double a = alpha;
    bool accepted = false;
    VectorXd z_try;
    double cost_try = cost;
    for (int ls = 0; ls < 40; ++ls) {
      z_try = project(z - a * g + mom);
      const VectorXd d = z_try - z;
      if (d.cwiseAbs().maxCoeff() == 0.0) break;
      cost_try = rollout.evaluate(to_u(z_try)).total;
      if (std::isfinite(cost_try) && cost_try < cost && cost_try <= cost + 1e-4 * g.dot(d)) {
        accepted = true;
        break;
      }
      if (mom.squaredNorm() > 0.0) {
        mom.setZero();
      } else {
        a *= 0.5;
      }
    }
    if (!accepted) {
      // Leave the cache consistent with the incumbent.
      rollout.evaluate(to_u(z));
      plan.status = PlanStatus::kStalled;
      break;
    }

    const VectorXd g_new = gradient(z_try, cost_try);
    if (!g_new.allFinite()) return degraded();
    const VectorXd s = z_try - z;
    const double sy = s.dot(g_new - g);
    alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : 2.0 * a;

    const double rel = (cost - cost_try) / std::max(std::abs(cost), 1e-300);
    z_prev = z;
    z = z_try;
    cost = cost_try;
    g = g_new;
    if (rel < cfg.rel_cost_tolerance) {
      plan.projected_gradient_norm = projected_norm(z, g);
      plan.status = plan.projected_gradient_norm < cfg.grad_tolerance ? PlanStatus::kConverged
                                                                      : PlanStatus::kStalled;
      ++it;
      break;
    }
  }
  if (plan.status == PlanStatus::kIterationLimit) plan.projected_gradient_norm = projected_norm(z, g);

  const VectorXd u = to_u(z);
  plan.iterations = it;
  plan.controls = unflatten(u);
  for (auto& c : plan.controls) c = bounds.clamp(c);
  plan.predicted_states = rollout.states();

  CostBreakdown b;
  try {
    b = horizon_cost(plan.controls, problem, gamma, weights, cfg);
  } catch (const NumericalError&) {
    return degraded();
  }
  plan.cost_tracking = b.tracking;
  plan.cost_info = b.info;
  plan.cost_total = b.tracking + gamma * b.info;
  plan.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return plan;
}

std::vector<ControlInput> shift_plan(const HorizonPlan& plan) {
  if (plan.controls.empty() || plan.status == PlanStatus::kDegraded) return {};
  std::vector<ControlInput> out(plan.controls.begin() + 1, plan.controls.end());
  out.push_back(plan.controls.back());
  return out;
}

ControlInput receding_step(const HorizonPlan& plan) {
  if (plan.controls.empty()) throw InvalidArgument("receding_step: empty plan");
  if (plan.status == PlanStatus::kDegraded) return ControlInput::zero();
  return plan.controls.front();
}

}  // namespace infoplan
