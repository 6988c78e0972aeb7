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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "infoplan/dynamics.hpp"
#include "infoplan/error.hpp"

namespace infoplan {
namespace {

const InertialParams kRobot{9.7, 7.0, 7.0, 10.0};

RigidBodyState spinning(const Vector3& w) {
  return RigidBodyState::from(Vector3::Zero(), Vector4(0, 0, 0, 1), Vector3::Zero(), w);
}

TEST(Dynamics, RestIsEquilibrium) {
  const StateDerivative d = deriv(RigidBodyState::at_rest(), ControlInput::zero(), kRobot);
  EXPECT_EQ(d.norm(), 0.0);
}

TEST(Dynamics, ForceOverMass) {
  ControlInput u;
  u.force = Vector3(9.7, 0, 0);
  const StateDerivative d = deriv(RigidBodyState::at_rest(), u, kRobot);
  EXPECT_NEAR(d[idx::kVel], 1.0, 1e-15);
  EXPECT_EQ(d[idx::kVel + 1], 0.0);
  EXPECT_EQ(d[idx::kVel + 2], 0.0);
}

TEST(Dynamics, EulerEquationByHand) {
  // Iw = (0, 0.7, 1.0); (w x Iw)_x = 0.1*1.0 - 0.1*0.7 = 0.03.
  const StateDerivative d = deriv(spinning({0, 0.1, 0.1}), ControlInput::zero(), kRobot);
  EXPECT_NEAR(d[idx::kOmega], -0.03 / 7.0, 1e-15);
  EXPECT_NEAR(d[idx::kOmega], -0.0042857, 1e-7);
  EXPECT_NEAR(d[idx::kOmega + 1], 0.0, 1e-15);
  EXPECT_NEAR(d[idx::kOmega + 2], 0.0, 1e-15);
}

TEST(Dynamics, BodyForceIsRotated) {
  // Yawed by pi/2: body x points along inertial y.
  const Vector4 q = quat::from_axis_angle(Vector3::UnitZ(), std::numbers::pi / 2);
  const RigidBodyState x = RigidBodyState::from(Vector3::Zero(), q, Vector3::Zero(), Vector3::Zero());
  ControlInput u;
  u.force = Vector3(9.7, 0, 0);
  const StateDerivative body = deriv(x, u, kRobot);
  EXPECT_NEAR(body[idx::kVel], 0.0, 1e-15);
  EXPECT_NEAR(body[idx::kVel + 1], 1.0, 1e-15);
  const StateDerivative inertial = deriv(x, u, kRobot, {ForceFrame::kInertial});
  EXPECT_NEAR(inertial[idx::kVel], 1.0, 1e-15);
}

TEST(Dynamics, StepAtRestUnchanged) {
  const RigidBodyState x = RigidBodyState::from({1, 2, 3}, Vector4(0, 0, 0, 1), Vector3::Zero(),
                                                Vector3::Zero());
  EXPECT_EQ(step(x, ControlInput::zero(), kRobot, 0.7), x);
}

TEST(Dynamics, ConstantThrustIsExact) {
  ControlInput u;
  u.force = Vector3(9.7, 0, 0);
  const RigidBodyState x = step(RigidBodyState::at_rest(), u, kRobot, 1.0);
  EXPECT_NEAR(x.v()[0], 1.0, 1e-14);
  EXPECT_NEAR(x.r()[0], 0.5, 1e-14);
}

TEST(Dynamics, PrincipalSpinIsEquilibrium) {
  const RigidBodyState x = integrate(spinning({0, 0, 1}), ControlInput::zero(), kRobot, 10.0, 1000);
  EXPECT_LT((x.w() - Vector3(0, 0, 1)).norm(), 1e-9);
}

TEST(Dynamics, QuaternionStaysUnit) {
  RigidBodyState x = spinning({0.4, -0.7, 1.1});
  ControlInput u;
  u.torque = Vector3(0.05, 0.02, -0.03);
  for (int i = 0; i < 500; ++i) {
    x = step(x, u, kRobot, 0.05);
    ASSERT_NEAR(x.q().norm(), 1.0, 1e-9);
    ASSERT_TRUE(x.all_finite());
  }
}

TEST(Dynamics, Rk4IsFourthOrder) {
  const RigidBodyState x0 = spinning({0.3, -0.2, 0.5});
  ControlInput u;
  u.torque = Vector3(0.02, 0.01, -0.01);
  const RigidBodyState ref = integrate(x0, u, kRobot, 2.0, 4096);
  const double e1 = (integrate(x0, u, kRobot, 2.0, 16).x - ref.x).norm();
  const double e2 = (integrate(x0, u, kRobot, 2.0, 32).x - ref.x).norm();
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Dynamics, TorqueFreeConservation) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> w(-0.6, 0.6);
  for (int trial = 0; trial < 5; ++trial) {
    const RigidBodyState x0 = spinning({w(rng), w(rng), w(rng)});
    const RigidBodyState x = integrate(x0, ControlInput::zero(), kRobot, 10.0, 1000);
    const Vector3 h0 = angular_momentum_inertial(x0, kRobot);
    const double e0 = rotational_energy(x0, kRobot);
    EXPECT_LT((angular_momentum_inertial(x, kRobot) - h0).norm() / h0.norm(), 1e-6);
    EXPECT_LT(std::abs(rotational_energy(x, kRobot) - e0) / e0, 1e-6);
  }
}

TEST(Dynamics, ExactMeasurementWithoutNoise) {
  const RigidBodyState x =
      RigidBodyState::from({1, 2, 3}, Vector4(0, 0, 0, 1), {0.1, 0.2, 0.3}, {-0.1, 0.5, 0.0});
  Rng rng(3);
  const Measurement y = measure(x, NoiseSpec{}, rng);
  EXPECT_EQ(y.v, x.v());
  EXPECT_EQ(y.w, x.w());
}

TEST(Dynamics, MeasurementReproducibleForSeed) {
  NoiseSpec noise;
  noise.measurement_var.setConstant(1e-4);
  const RigidBodyState x = spinning({0.1, 0.2, 0.3});
  Rng a(11), b(11);
  EXPECT_EQ(measure(x, noise, a).as_vector(), measure(x, noise, b).as_vector());
}

TEST(Dynamics, MeasurementNoiseCovariance) {
  NoiseSpec noise;
  noise.measurement_var.setConstant(1e-2);
  const RigidBodyState x = RigidBodyState::at_rest();
  Rng rng(5);
  const int n = 100000;
  Eigen::Matrix<double, 6, 6> acc = Eigen::Matrix<double, 6, 6>::Zero();
  Vector6 mean = Vector6::Zero();
  std::vector<Vector6> samples(n);
  for (auto& s : samples) {
    s = measure(x, noise, rng).as_vector();
    mean += s;
  }
  mean /= n;
  for (const auto& s : samples) acc += (s - mean) * (s - mean).transpose();
  acc /= (n - 1);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(acc(i, i), 1e-2, 5e-4);
    for (int j = 0; j < i; ++j) EXPECT_LT(std::abs(acc(i, j)), 5e-4);
  }
}

TEST(Dynamics, PlanarReduce) {
  EXPECT_EQ(planar_reduce(RigidBodyState::at_rest()).heading, 0.0);
  const Vector4 q = quat::from_axis_angle(Vector3::UnitZ(), std::numbers::pi / 2);
  const RigidBodyState x = RigidBodyState::from({1, 2, 0}, q, {0.1, 0, 0}, {0, 0, 0.2});
  const PlanarState p = planar_reduce(x, true);
  EXPECT_NEAR(p.heading, std::numbers::pi / 2, 1e-14);
  EXPECT_EQ(p.rx, 1.0);
  EXPECT_EQ(p.wz, 0.2);
  const Vector4 tilt = quat::from_axis_angle(Vector3(1, 1, 0).normalized(), 0.3);
  const RigidBodyState tilted = RigidBodyState::from({0, 0, 0}, tilt, {0, 0, 0}, {0, 0, 0});
  EXPECT_THROW(planar_reduce(tilted, true), InvalidArgument);
  EXPECT_NO_THROW(planar_reduce(tilted, false));
}

TEST(Dynamics, QuaternionAlgebra) {
  const Vector4 a = quat::from_axis_angle(Vector3(1, 2, 3).normalized(), 0.7);
  const Vector4 b = quat::from_axis_angle(Vector3(-1, 0, 2).normalized(), 1.3);
  const Matrix3 rab = quat::rotation(quat::multiply(a, b));
  EXPECT_LT((rab - quat::rotation(a) * quat::rotation(b)).norm(), 1e-14);
  const Vector4 id = quat::multiply(a, quat::conjugate(a));
  EXPECT_LT((id - Vector4(0, 0, 0, 1)).norm(), 1e-15);
}

TEST(Dynamics, RejectsInvalidInputs) {
  EXPECT_THROW((InertialParams{-1, 7, 7, 10}.validate()), InvalidArgument);
  EXPECT_THROW((InertialParams{9.7, 7, NAN, 10}.validate()), InvalidArgument);
  EXPECT_THROW(step(RigidBodyState::at_rest(), ControlInput::zero(), kRobot, 0.0), InvalidArgument);
  RigidBodyState bad;
  bad.x[0] = NAN;
  EXPECT_THROW(step(bad, ControlInput::zero(), kRobot, 0.1), InvalidArgument);
}

TEST(Dynamics, TriangleInequalityIsAWarningOnly) {
  const InertialParams odd{9.7, 1.0, 1.0, 10.0};
  EXPECT_TRUE(odd.violates_triangle_inequality());
  EXPECT_NO_THROW(odd.validate());
  EXPECT_FALSE(kRobot.violates_triangle_inequality());
}

}  // namespace
}  // namespace infoplan
