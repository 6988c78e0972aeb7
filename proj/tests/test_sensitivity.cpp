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
#include <random>

#include <gtest/gtest.h>

#include "infoplan/sensitivity.hpp"
#include "oracles.hpp"

namespace infoplan {
namespace {

const InertialParams kRobot{9.7, 7.0, 7.0, 10.0};

ControlInput thrust(const Vector3& f) {
  ControlInput u;
  u.force = f;
  return u;
}

TEST(Sensitivity, RestGivesZeroRate) {
  const SensitivityMatrix zero = SensitivityMatrix::Zero();
  const SensitivityMatrix d =
      sensitivity_deriv(RigidBodyState::at_rest(), zero, ControlInput::zero(), kRobot);
  EXPECT_EQ(d.norm(), 0.0);
}

TEST(Sensitivity, MassDerivativeOfThrust) {
  const SensitivityMatrix zero = SensitivityMatrix::Zero();
  const SensitivityMatrix d =
      sensitivity_deriv(RigidBodyState::at_rest(), zero, thrust({9.7, 0, 0}), kRobot);
  EXPECT_NEAR(d(idx::kVel, 0), -9.7 / (9.7 * 9.7), 1e-15);
  EXPECT_NEAR(d(idx::kVel, 0), -0.10309, 1e-5);
  SensitivityMatrix rest = d;
  rest(idx::kVel, 0) = 0.0;
  EXPECT_EQ(rest.norm(), 0.0);
}

TEST(Sensitivity, DynamicMatrixOverloadAgrees) {
  std::mt19937_64 rng(9);
  const oracle::Trajectory tr = oracle::random_trajectory(rng);
  SensitivityMatrix phi = SensitivityMatrix::Random();
  const SensitivityMatrix fixed = sensitivity_deriv(tr.x0, phi, tr.controls[3], kRobot);
  const Eigen::MatrixXd dyn = sensitivity_deriv(tr.x0, Eigen::MatrixXd(phi), tr.controls[3], kRobot);
  EXPECT_LT((fixed - dyn).norm(), 1e-13 * (1.0 + fixed.norm()));
}

TEST(Sensitivity, JacobiansMatchFiniteDifferences) {
  std::mt19937_64 rng(21);
  const oracle::Trajectory tr = oracle::random_trajectory(rng);
  const RigidBodyState& x = tr.x0;
  const ControlInput& u = tr.controls[7];
  const StateJacobian a = state_jacobian(x, u, kRobot);
  for (int i = 0; i < kStateDim; ++i) {
    RigidBodyState p = x, m = x;
    p.x[i] += 1e-6;
    m.x[i] -= 1e-6;
    const StateVector col = (deriv(p, u, kRobot) - deriv(m, u, kRobot)) / 2e-6;
    EXPECT_LT((a.col(i) - col).norm(), 1e-7) << "column " << i;
  }
  const SensitivityMatrix b = param_jacobian(x, u, kRobot);
  for (int j = 0; j < kParamDim; ++j) {
    Vector4 p = kRobot.as_vector(), m = kRobot.as_vector();
    p[j] += 1e-6;
    m[j] -= 1e-6;
    const StateVector col =
        (deriv(x, u, InertialParams::from_vector(p)) - deriv(x, u, InertialParams::from_vector(m))) /
        2e-6;
    EXPECT_LT((b.col(j) - col).norm(), 1e-8) << "param " << j;
  }
}

TEST(Sensitivity, AtRestNothingMoves) {
  const JointState j = propagate_joint(RigidBodyState::at_rest(), SensitivityMatrix::Zero(),
                                       ControlInput::zero(), kRobot, 0.5);
  EXPECT_EQ(j.x, RigidBodyState::at_rest());
  EXPECT_EQ(j.phi.norm(), 0.0);
}

TEST(Sensitivity, StateMatchesStepExactly) {
  std::mt19937_64 rng(4);
  const oracle::Trajectory tr = oracle::random_trajectory(rng);
  RigidBodyState x = tr.x0;
  SensitivityMatrix phi = SensitivityMatrix::Zero();
  for (const auto& u : tr.controls) {
    const JointState j = propagate_joint(x, phi, u, kRobot, 0.1);
    const RigidBodyState s = step(x, u, kRobot, 0.1);
    ASSERT_EQ(j.x, s);
    x = j.x;
    phi = j.phi;
  }
}

TEST(Sensitivity, ThrustOnlyArcDecouples) {
  const JointState j = propagate_joint_interval(RigidBodyState::at_rest(), SensitivityMatrix::Zero(),
                                                thrust({0.3, -0.2, 0.1}), kRobot, 1.0, 20);
  EXPECT_GT(j.phi.col(0).norm(), 0.0);
  EXPECT_EQ(j.phi.col(0).segment<4>(idx::kQuat).norm(), 0.0);
  EXPECT_EQ(j.phi.col(0).segment<3>(idx::kOmega).norm(), 0.0);
  EXPECT_EQ(j.phi.rightCols<3>().norm(), 0.0);

  const HMatrix h = output_sensitivity(j.phi);
  EXPECT_GT((h.block<3, 1>(0, 0).norm()), 0.0);
  HMatrix rest = h;
  rest.block<3, 1>(0, 0).setZero();
  EXPECT_EQ(rest.norm(), 0.0);
}

TEST(Sensitivity, OutputSensitivityIgnoresUnmeasuredRows) {
  EXPECT_EQ(output_sensitivity(SensitivityMatrix::Zero()).norm(), 0.0);
  SensitivityMatrix phi = SensitivityMatrix::Zero();
  phi.topRows<3>().setOnes();
  EXPECT_EQ(output_sensitivity(phi).norm(), 0.0);
  phi.setRandom();
  const HMatrix h = output_sensitivity(phi);
  EXPECT_EQ(h.topRows<3>(), phi.middleRows<3>(idx::kVel));
  EXPECT_EQ(h.bottomRows<3>(), phi.middleRows<3>(idx::kOmega));
}

TEST(Sensitivity, MatchesCentralDifferencesOnRandomArcs) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::Trajectory tr = oracle::random_trajectory(rng);
    RigidBodyState x = tr.x0;
    SensitivityMatrix phi = SensitivityMatrix::Zero();
    for (const auto& u : tr.controls) {
      const JointState j = propagate_joint_interval(x, phi, u, kRobot, tr.interval, tr.substeps);
      x = j.x;
      phi = j.phi;
    }
    EXPECT_LT(oracle::max_column_rel_error(phi, oracle::fd_sensitivity(tr, kRobot)), 1e-4)
        << "trial " << trial;
  }
}

}  // namespace
}  // namespace infoplan
