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
#include "infoplan/ukf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "infoplan/error.hpp"

namespace infoplan {
namespace {

constexpr int kSigmaCount = 2 * kParamDim + 1;
constexpr double kMaxLogMagnitude = 700.0;

Matrix4 symmetrized(const Matrix4& p) { return 0.5 * (p + p.transpose()); }

double min_eigenvalue(const Matrix4& p) {
  Eigen::SelfAdjointEigenSolver<Matrix4> es(p, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

void UkfConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("ukf alpha must lie in (0, 1]");
  if ((q_theta.array() < 0.0).any() || !q_theta.allFinite()) {
    throw InvalidArgument("ukf q_theta must be a non-negative diagonal");
  }
  if ((sigma_meas.array() <= 0.0).any() || !sigma_meas.allFinite()) {
    throw InvalidArgument("ukf measurement covariance must be positive");
  }
  if (substeps < 1) throw InvalidArgument("ukf substeps must be at least 1");
  if (kParamDim + kappa <= 0.0) throw InvalidArgument("ukf kappa must satisfy n + kappa > 0");
}

Vector4 EstimatorBelief::physical_std() const {
  const Vector4 theta = log_mean.array().exp();
  return theta.cwiseProduct(p.diagonal().cwiseMax(0.0).cwiseSqrt());
}

EstimatorBelief EstimatorBelief::from_guess(const InertialParams& guess, const Vector4& log_std) {
  guess.validate();
  EstimatorBelief b;
  b.log_mean = guess.as_vector().array().log();
  b.p = log_std.cwiseAbs2().asDiagonal();
  return b;
}

SigmaWeights sigma_weights(const UkfConfig& cfg) {
  const double n = kParamDim;
  SigmaWeights w;
  w.lambda = cfg.alpha * cfg.alpha * (n + cfg.kappa) - n;
  w.mean0 = w.lambda / (n + w.lambda);
  w.cov0 = w.mean0 + (1.0 - cfg.alpha * cfg.alpha + cfg.beta);
  w.rest = 1.0 / (2.0 * (n + w.lambda));
  return w;
}

EstimatorBelief ukf_predict(const EstimatorBelief& belief, const UkfConfig& cfg) {
  EstimatorBelief out = belief;
  out.p.diagonal() += cfg.q_theta;
  return out;
}

MeasurementPrediction predict_measurement(const EstimatorBelief& belief,
                                          const RigidBodyState& x_prev, const ControlInput& u,
                                          double dt, const UkfConfig& cfg) {
  const SigmaWeights w = sigma_weights(cfg);
  Eigen::LLT<Matrix4> llt(belief.p);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ukf: covariance is not positive definite; estimator diverged");
  }
  const Matrix4 spread = std::sqrt(kParamDim + w.lambda) * Matrix4(llt.matrixL());

  std::array<Vector4, kSigmaCount> chi;
  chi[0] = belief.log_mean;
  for (int i = 0; i < kParamDim; ++i) {
    chi[1 + i] = belief.log_mean + spread.col(i);
    chi[1 + kParamDim + i] = belief.log_mean - spread.col(i);
  }

  std::array<Vector6, kSigmaCount> ys;
  for (int i = 0; i < kSigmaCount; ++i) {
    const InertialParams theta = InertialParams::from_vector(chi[i].array().exp());
    RigidBodyState next;
    try {
      next = integrate(x_prev, u, theta, dt, cfg.substeps, cfg.dynamics);
    } catch (const InvalidArgument& e) {
      if (!x_prev.all_finite()) throw;
      throw NumericalError(std::string("ukf: sigma point could not be propagated: ") + e.what());
    }
    ys[i] << next.v(), next.w();
    if (!ys[i].allFinite()) throw NumericalError("ukf: sigma point produced a non-finite measurement");
  }

  MeasurementPrediction pred;
  pred.mean = w.mean0 * ys[0];
  for (int i = 1; i < kSigmaCount; ++i) pred.mean += w.rest * ys[i];

  pred.s = cfg.sigma_meas.asDiagonal();
  for (int i = 0; i < kSigmaCount; ++i) {
    const double wc = i == 0 ? w.cov0 : w.rest;
    const Vector6 dy = ys[i] - pred.mean;
    pred.s += wc * dy * dy.transpose();
    pred.cross += wc * (chi[i] - belief.log_mean) * dy.transpose();
  }
  pred.s = 0.5 * (pred.s + pred.s.transpose()).eval();
  return pred;
}

UkfUpdateResult ukf_update_detailed(const EstimatorBelief& belief, const RigidBodyState& x_prev,
                                    const ControlInput& u, const Measurement& y, double dt,
                                    const UkfConfig& cfg) {
  const MeasurementPrediction pred = predict_measurement(belief, x_prev, u, dt, cfg);
  Eigen::LDLT<Matrix6> ldlt(pred.s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericalError("ukf: innovation covariance is not positive definite");
  }
  const Eigen::Matrix<double, kParamDim, kMeasDim> gain =
      ldlt.solve(pred.cross.transpose()).transpose();

  UkfUpdateResult r;
  r.innovation = y.as_vector() - pred.mean;
  r.normalized_innovation = r.innovation.cwiseQuotient(pred.s.diagonal().cwiseSqrt());
  r.belief.log_mean = belief.log_mean + gain * r.innovation;
  r.belief.p = symmetrized(belief.p - gain * pred.s * gain.transpose());

  const double min_eig = min_eigenvalue(r.belief.p);
  // exp() of the mean must stay a positive finite double.
  if (!(r.belief.log_mean.array().abs() < kMaxLogMagnitude).all()) {
    throw NumericalError("ukf: update drove the parameter estimate out of range");
  }
  if (!r.belief.p.allFinite() || min_eig < -1e-10) {
    throw NumericalError("ukf: posterior covariance lost positive semi-definiteness (min eigenvalue " +
                         std::to_string(min_eig) + ")");
  }
  return r;
}

EstimatorBelief ukf_update(const EstimatorBelief& belief, const RigidBodyState& x_prev,
                           const ControlInput& u, const Measurement& y, double dt,
                           const UkfConfig& cfg) {
  return ukf_update_detailed(belief, x_prev, u, y, dt, cfg).belief;
}

HealthStatus divergence_check(const EstimatorBelief& belief, const BeliefHistory& history,
                              const UkfConfig& cfg) {
  if (!belief.log_mean.allFinite() || !belief.p.allFinite()) return HealthStatus::kUnhealthy;
  if (history.size() < 2) return HealthStatus::kHealthy;

  int increases = 0;
  for (std::size_t i = history.size() - 1; i > 0; --i) {
    if (history[i].trace_p > history[i - 1].trace_p) {
      ++increases;
    } else {
      break;
    }
  }
  if (increases >= cfg.trace_increase_limit) return HealthStatus::kUnhealthy;

  int spikes = 0;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->max_normalized_innovation > cfg.innovation_sigma_limit) {
      ++spikes;
    } else {
      break;
    }
  }
  if (spikes >= cfg.innovation_repeat_limit) return HealthStatus::kUnhealthy;
  return HealthStatus::kHealthy;
}

ParameterEstimator::ParameterEstimator(EstimatorBelief prior, UkfConfig cfg)
    : belief_(std::move(prior)), cfg_(std::move(cfg)) {
  cfg_.validate();
  history_.push_back({belief_.p.trace(), 0.0});
}

HealthStatus ParameterEstimator::update(const RigidBodyState& x_prev, const ControlInput& u,
                                        const Measurement& y, double dt) {
  const EstimatorBelief prior = ukf_predict(belief_, cfg_);
  const UkfUpdateResult r = ukf_update_detailed(prior, x_prev, u, y, dt, cfg_);
  belief_ = r.belief;
  history_.push_back({belief_.p.trace(), r.normalized_innovation.cwiseAbs().maxCoeff()});
  health_ = divergence_check(belief_, history_, cfg_);
  return health_;
}

}  // namespace infoplan
