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
#ifndef INFOPLAN_DYNAMICS_HPP_
#define INFOPLAN_DYNAMICS_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace infoplan {

using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix3 = Eigen::Matrix3d;

inline constexpr int kStateDim = 13;
inline constexpr int kParamDim = 4;
inline constexpr int kMeasDim = 6;
inline constexpr int kControlDim = 6;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateDerivative = StateVector;

// Offsets into the 13-component state vector [r, q, v, w].
namespace idx {
inline constexpr int kPos = 0;
inline constexpr int kQuat = 3;
inline constexpr int kVel = 7;
inline constexpr int kOmega = 10;
}  // namespace idx

// Free-flyer state: inertial position, scalar-last attitude quaternion
// [qx, qy, qz, qw] (body to inertial), inertial linear velocity and body
// angular velocity.
struct RigidBodyState {
  StateVector x = identity_vector();

  static StateVector identity_vector() {
    StateVector s = StateVector::Zero();
    s[idx::kQuat + 3] = 1.0;
    return s;
  }
  static RigidBodyState at_rest() { return {}; }
  static RigidBodyState from(const Vector3& r, const Vector4& q,
                             const Vector3& v, const Vector3& w);

  auto r() { return x.segment<3>(idx::kPos); }
  auto q() { return x.segment<4>(idx::kQuat); }
  auto v() { return x.segment<3>(idx::kVel); }
  auto w() { return x.segment<3>(idx::kOmega); }
  auto r() const { return x.segment<3>(idx::kPos); }
  auto q() const { return x.segment<4>(idx::kQuat); }
  auto v() const { return x.segment<3>(idx::kVel); }
  auto w() const { return x.segment<3>(idx::kOmega); }

  bool all_finite() const { return x.allFinite(); }
  friend bool operator==(const RigidBodyState& a, const RigidBodyState& b) {
    return a.x == b.x;
  }
};

// Uncertain parameter vector theta = (m, Ixx, Iyy, Izz).
struct InertialParams {
  double mass = 1.0;
  double ixx = 1.0;
  double iyy = 1.0;
  double izz = 1.0;

  Vector4 as_vector() const { return {mass, ixx, iyy, izz}; }
  static InertialParams from_vector(const Vector4& p) {
    return {p[0], p[1], p[2], p[3]};
  }

  // Throws InvalidArgument unless every value is finite and strictly positive.
  void validate() const;
  // True when the principal moments violate a triangle inequality. Such a
  // body cannot exist physically; callers may warn but estimation proceeds.
  bool violates_triangle_inequality() const;

  friend bool operator==(const InertialParams&, const InertialParams&) = default;
};

// Body-frame force (N) and torque (N m).
struct ControlInput {
  Vector3 force = Vector3::Zero();
  Vector3 torque = Vector3::Zero();

  Vector6 as_vector() const {
    Vector6 u;
    u << force, torque;
    return u;
  }
  static ControlInput from_vector(const Vector6& u) {
    return {u.head<3>(), u.tail<3>()};
  }
  static ControlInput zero() { return {}; }
  friend bool operator==(const ControlInput& a, const ControlInput& b) {
    return a.force == b.force && a.torque == b.torque;
  }
};

// Measured linear and angular velocity.
struct Measurement {
  Vector3 v = Vector3::Zero();
  Vector3 w = Vector3::Zero();

  Vector6 as_vector() const {
    Vector6 y;
    y << v, w;
    return y;
  }
  static Measurement from_vector(const Vector6& y) {
    return {y.head<3>(), y.tail<3>()};
  }
};

// Diagonal noise description. measurement_var is the diagonal of the 6x6
// measurement covariance; process_var is the diagonal of the covariance of
// velocity perturbations applied to the plant once per control interval.
struct NoiseSpec {
  Vector6 measurement_var = Vector6::Zero();
  Vector6 process_var = Vector6::Zero();
  std::uint64_t seed = 0;

  void validate() const;
};

enum class ForceFrame { kBody, kInertial };

struct DynamicsOptions {
  ForceFrame force_frame = ForceFrame::kBody;
};

struct PlanarState {
  double rx = 0.0;
  double ry = 0.0;
  double heading = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double wz = 0.0;
};

using Rng = std::mt19937_64;

// Quaternion helpers, scalar-last Hamilton convention.
namespace quat {
Matrix3 rotation(const Vector4& q);
Vector4 multiply(const Vector4& a, const Vector4& b);
Vector4 conjugate(const Vector4& q);
Vector4 from_axis_angle(const Vector3& axis, double angle);
// 3x4 matrix with qdot = 0.5 * hbar(q)^T * w for body rate w.
Eigen::Matrix<double, 3, 4> hbar(const Vector4& q);
}  // namespace quat

// Continuous-time dynamics xdot = f(x, u, theta).
StateDerivative deriv(const RigidBodyState& x, const ControlInput& u,
                      const InertialParams& theta,
                      const DynamicsOptions& opts = {});

// One RK4 step of length dt followed by quaternion renormalization.
RigidBodyState step(const RigidBodyState& x, const ControlInput& u,
                    const InertialParams& theta, double dt,
                    const DynamicsOptions& opts = {});

// Zero-order-hold advance over interval seconds using substeps RK4 steps.
RigidBodyState integrate(const RigidBodyState& x, const ControlInput& u,
                         const InertialParams& theta, double interval,
                         int substeps, const DynamicsOptions& opts = {});

// Velocity measurement, with Gaussian noise drawn from noise.measurement_var.
Measurement measure(const RigidBodyState& x, const NoiseSpec& noise, Rng& rng);

// Projection onto the plane. In strict mode an attitude with more than
// 1e-6 of off-plane rotation is rejected.
PlanarState planar_reduce(const RigidBodyState& x, bool strict = false);

// Rigid-body invariants used by conservation checks.
Vector3 angular_momentum_inertial(const RigidBodyState& x,
                                  const InertialParams& theta);
double rotational_energy(const RigidBodyState& x, const InertialParams& theta);

namespace detail {
// Unchecked derivative used inside the integrators.
void deriv_unchecked(const StateVector& x, const Vector6& u,
                     const InertialParams& theta, const DynamicsOptions& opts,
                     StateVector& xdot);
void validate_step_inputs(const RigidBodyState& x, const ControlInput& u,
                          const InertialParams& theta, double dt);
}  // namespace detail

}  // namespace infoplan

#endif  // INFOPLAN_DYNAMICS_HPP_
