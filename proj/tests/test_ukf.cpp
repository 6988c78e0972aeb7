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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "infoplan/error.hpp"
#include "infoplan/ukf.hpp"
#include "oracles.hpp"

namespace infoplan {
namespace {

const InertialParams kRobot{9.7, 7.0, 7.0, 10.0};

UkfConfig fast_config() {
  UkfConfig cfg;
  cfg.substeps = 10;
  return cfg;
}

Measurement exact(const RigidBodyState& x) { return {x.v(), x.w()}; }

TEST(Ukf, SigmaWeightsSumToOne) {
  const UkfConfig cfg;
  const SigmaWeights w = sigma_weights(cfg);
  EXPECT_NEAR(w.mean0 + 2 * kParamDim * w.rest, 1.0, 1e-12);
  // lambda = alpha^2 (n + kappa) - n
  EXPECT_NEAR(w.lambda, 0.01 * 4 - 4, 1e-15);
  EXPECT_NEAR(w.cov0, w.mean0 + (1 - 0.01 + 2), 1e-12);
}

TEST(Ukf, PredictWithoutProcessNoiseIsIdentity) {
  UkfConfig cfg;
  cfg.q_theta.setZero();
  const EstimatorBelief b = EstimatorBelief::from_guess(kRobot, Vector4::Constant(0.3));
  const EstimatorBelief p = ukf_predict(b, cfg);
  EXPECT_EQ(p.log_mean, b.log_mean);
  EXPECT_EQ(p.p, b.p);
}

TEST(Ukf, PredictAddsProcessNoise) {
  UkfConfig cfg;
  cfg.q_theta.setConstant(1e-6);
  EstimatorBelief b = EstimatorBelief::from_guess(kRobot, Vector4::Constant(0.3));
  const double t0 = b.p.trace();
  EXPECT_NEAR(ukf_predict(b, cfg).p.trace() - t0, 4e-6, 1e-15);
  for (int i = 1; i <= 100; ++i) {
    b = ukf_predict(b, cfg);
    EXPECT_NEAR(b.p.trace() - t0, 4e-6 * i, 1e-13);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix4>(b.p).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Ukf, ZeroInnovationKeepsMean) {
  const UkfConfig cfg = fast_config();
  const EstimatorBelief b = EstimatorBelief::from_guess({11, 8, 6, 12}, Vector4::Constant(0.3));
  const RigidBodyState x =
      RigidBodyState::from({0, 0, 0}, Vector4(0, 0, 0, 1), {0.1, 0, 0}, {0.1, -0.2, 0.3});
  ControlInput u;
  u.force = Vector3(0.2, 0.1, 0);
  u.torque = Vector3(0.05, -0.02, 0.01);
  const MeasurementPrediction pred = predict_measurement(b, x, u, 1.0, cfg);
  const EstimatorBelief post = ukf_update(b, x, u, Measurement::from_vector(pred.mean), 1.0, cfg);
  EXPECT_EQ(post.log_mean, b.log_mean);
  EXPECT_LT(post.p.trace(), b.p.trace());
}

TEST(Ukf, TranslationLeavesInertiaUntouched) {
  UkfConfig cfg = fast_config();
  cfg.q_theta.setZero();
  ParameterEstimator est(EstimatorBelief::from_guess({12, 8, 8, 12}, Vector4::Constant(0.5)), cfg);
  const Matrix4 p0 = est.belief().p;
  RigidBodyState x = RigidBodyState::at_rest();
  ControlInput u;
  for (int k = 0; k < 20; ++k) {
    u.force = Vector3(0.3 * std::cos(0.3 * k), 0.2, -0.1);
    const RigidBodyState next = integrate(x, u, kRobot, 1.0, 10);
    est.update(x, u, exact(next), 1.0);
    x = next;
  }
  const Matrix4& p = est.belief().p;
  const double rel = (p.bottomRightCorner<3, 3>() - p0.bottomRightCorner<3, 3>()).norm() /
                     p0.bottomRightCorner<3, 3>().norm();
  EXPECT_LT(rel, 1e-10);
  EXPECT_LT(p(0, 0), 0.01 * p0(0, 0));
  for (int i = 1; i < 4; ++i) EXPECT_EQ(est.belief().log_mean[i], std::log(i == 3 ? 12.0 : 8.0));
}

TEST(Ukf, MassConvergesToLeastSquares) {
  const UkfConfig cfg = fast_config();
  ParameterEstimator est(EstimatorBelief::from_guess({12, 7, 7, 10}, Vector4::Constant(0.5)), cfg);
  RigidBodyState x = RigidBodyState::at_rest();
  std::vector<Vector3> forces, dv;
  for (int k = 0; k < 60; ++k) {
    ControlInput u;
    u.force = Vector3(0.4 * std::sin(0.2 * k), 0.3 * std::cos(0.15 * k), 0.1);
    const RigidBodyState next = integrate(x, u, kRobot, 1.0, 10);
    forces.push_back(u.force);
    dv.push_back(next.v() - x.v());
    EXPECT_EQ(est.update(x, u, exact(next), 1.0), HealthStatus::kHealthy);
    x = next;
  }
  const double m_ls = oracle::least_squares_mass(forces, dv, 1.0);
  EXPECT_NEAR(m_ls, 9.7, 1e-9);
  EXPECT_LT(std::abs(est.belief().theta_hat().mass - m_ls) / m_ls, 0.01);
}

TEST(Ukf, EstimateAlwaysPositive) {
  const UkfConfig cfg = fast_config();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> wild(0.0, 5.0);
  ParameterEstimator est(EstimatorBelief::from_guess(kRobot, Vector4::Constant(0.5)), cfg);
  const RigidBodyState x =
      RigidBodyState::from({0, 0, 0}, Vector4(0, 0, 0, 1), {0, 0, 0}, {0.2, 0.1, -0.1});
  ControlInput u;
  u.force = Vector3(0.4, 0, 0);
  u.torque = Vector3(0.1, -0.1, 0.1);
  for (int k = 0; k < 30; ++k) {
    Vector6 y;
    for (int i = 0; i < 6; ++i) y[i] = wild(rng);
    try {
      est.update(x, u, Measurement::from_vector(y), 1.0);
    } catch (const NumericalError&) {
      continue;
    }
    const Vector4 th = est.belief().theta_hat().as_vector();
    EXPECT_TRUE((th.array() > 0.0).all() && th.allFinite());
  }
}

TEST(UkfHealth, ShrinkingTraceIsHealthy) {
  const UkfConfig cfg;
  BeliefHistory h;
  for (int i = 0; i < 30; ++i) h.push_back({1.0 / (i + 1), 0.5});
  EXPECT_EQ(divergence_check(EstimatorBelief{}, h, cfg), HealthStatus::kHealthy);
}

TEST(UkfHealth, GrowingTraceWithoutInformationIsUnhealthy) {
  UkfConfig cfg = fast_config();
  cfg.q_theta.setConstant(1e-4);
  ParameterEstimator est(EstimatorBelief::from_guess(kRobot, Vector4::Constant(0.1)), cfg);
  const RigidBodyState rest = RigidBodyState::at_rest();
  for (int k = 0; k < 9; ++k) {
    EXPECT_EQ(est.update(rest, ControlInput::zero(), exact(rest), 1.0), HealthStatus::kHealthy);
  }
  EXPECT_EQ(est.update(rest, ControlInput::zero(), exact(rest), 1.0), HealthStatus::kUnhealthy);
}

TEST(UkfHealth, SingleSpikeIsTolerated) {
  const UkfConfig cfg;
  BeliefHistory h{{1.0, 0.0}, {0.9, 7.0}, {0.8, 0.5}};
  EXPECT_EQ(divergence_check(EstimatorBelief{}, h, cfg), HealthStatus::kHealthy);
  BeliefHistory repeated{{1.0, 0.0}, {0.9, 7.0}, {0.8, 7.0}, {0.7, 7.0}};
  EXPECT_EQ(divergence_check(EstimatorBelief{}, repeated, cfg), HealthStatus::kUnhealthy);
}

TEST(UkfHealth, NonFiniteBeliefIsUnhealthy) {
  EstimatorBelief b;
  b.log_mean[0] = NAN;
  EXPECT_EQ(divergence_check(b, {}, UkfConfig{}), HealthStatus::kUnhealthy);
}

TEST(Ukf, ConfigValidation) {
  UkfConfig cfg;
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = UkfConfig{};
  cfg.sigma_meas[2] = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_THROW(EstimatorBelief::from_guess({0, 1, 1, 1}, Vector4::Ones()), InvalidArgument);
}

}  // namespace
}  // namespace infoplan
