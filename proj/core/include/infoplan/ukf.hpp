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
#ifndef INFOPLAN_UKF_HPP_
#define INFOPLAN_UKF_HPP_

#include <vector>

#include <Eigen/Dense>

#include "infoplan/dynamics.hpp"

namespace infoplan {

using Matrix4 = Eigen::Matrix4d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

struct UkfConfig {
  double alpha = 1e-1;
  double beta = 2.0;
  double kappa = 0.0;
  // Random-walk covariance added to the log-parameter covariance per update.
  Vector4 q_theta = Vector4::Constant(1e-8);
  // Diagonal measurement covariance; shared with the plant's NoiseSpec.
  Vector6 sigma_meas = Vector6::Constant(1e-6);
  // RK4 substeps of the one-step measurement model.
  int substeps = 100;
  DynamicsOptions dynamics;

  // Health monitoring.
  int trace_increase_limit = 10;
  double innovation_sigma_limit = 6.0;
  int innovation_repeat_limit = 3;

  void validate() const;
};

// Belief over theta held in log space so every reported value is positive.
struct EstimatorBelief {
  Vector4 log_mean = Vector4::Zero();
  Matrix4 p = Matrix4::Identity();

  InertialParams theta_hat() const { return InertialParams::from_vector(log_mean.array().exp()); }
  // First-order standard deviation in physical units.
  Vector4 physical_std() const;

  static EstimatorBelief from_guess(const InertialParams& guess, const Vector4& log_std);
};

struct SigmaWeights {
  double lambda = 0.0;
  double mean0 = 0.0;
  double cov0 = 0.0;
  double rest = 0.0;
};
SigmaWeights sigma_weights(const UkfConfig& cfg);

struct MeasurementPrediction {
  Vector6 mean = Vector6::Zero();
  Matrix6 s = Matrix6::Zero();
  Eigen::Matrix<double, kParamDim, kMeasDim> cross = Eigen::Matrix<double, kParamDim, kMeasDim>::Zero();
};

// Mean unchanged, P <- P + q_theta.
EstimatorBelief ukf_predict(const EstimatorBelief& belief, const UkfConfig& cfg);

// Unscented transform of the one-step velocity model through the belief.
MeasurementPrediction predict_measurement(const EstimatorBelief& belief,
                                          const RigidBodyState& x_prev,
                                          const ControlInput& u, double dt,
                                          const UkfConfig& cfg);

struct UkfUpdateResult {
  EstimatorBelief belief;
  Vector6 innovation = Vector6::Zero();
  // Innovation divided by the predicted standard deviation, per channel.
  Vector6 normalized_innovation = Vector6::Zero();
};

UkfUpdateResult ukf_update_detailed(const EstimatorBelief& belief,
                                    const RigidBodyState& x_prev, const ControlInput& u,
                                    const Measurement& y, double dt, const UkfConfig& cfg);

// Throws NumericalError when the posterior covariance loses positive
// semi-definiteness.
EstimatorBelief ukf_update(const EstimatorBelief& belief, const RigidBodyState& x_prev,
                           const ControlInput& u, const Measurement& y, double dt,
                           const UkfConfig& cfg);

enum class HealthStatus { kHealthy, kUnhealthy };

struct HealthSample {
  double trace_p = 0.0;
  double max_normalized_innovation = 0.0;
};
using BeliefHistory = std::vector<HealthSample>;

// Unhealthy when trace(P) rose on trace_increase_limit consecutive updates,
// or when the normalized innovation exceeded innovation_sigma_limit on
// innovation_repeat_limit consecutive updates.
HealthStatus divergence_check(const EstimatorBelief& belief, const BeliefHistory& history,
                              const UkfConfig& cfg);

// Stateful single-owner wrapper: predict, update and health bookkeeping.
class ParameterEstimator {
 public:
  ParameterEstimator(EstimatorBelief prior, UkfConfig cfg);

  HealthStatus update(const RigidBodyState& x_prev, const ControlInput& u,
                      const Measurement& y, double dt);

  const EstimatorBelief& belief() const { return belief_; }
  const BeliefHistory& history() const { return history_; }
  HealthStatus health() const { return health_; }
  const UkfConfig& config() const { return cfg_; }

 private:
  EstimatorBelief belief_;
  UkfConfig cfg_;
  BeliefHistory history_;
  HealthStatus health_ = HealthStatus::kHealthy;
};

}  // namespace infoplan

#endif  // INFOPLAN_UKF_HPP_
