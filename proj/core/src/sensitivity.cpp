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
#include "infoplan/sensitivity.hpp"

#include "infoplan/error.hpp"

namespace infoplan {
namespace {

using Matrix34 = Eigen::Matrix<double, 3, 4>;

// d(R(q) f)/dq for the polynomial rotation matrix used by the dynamics.
Matrix34 rotated_force_jacobian(const Eigen::Ref<const Vector4>& q, const Vector3& f) {
  const double x = q[0], y = q[1], z = q[2], w = q[3];
  const double fx = f[0], fy = f[1], fz = f[2];
  Matrix34 j;
  j << 2 * y * fy + 2 * z * fz, -4 * y * fx + 2 * x * fy + 2 * w * fz,
      -4 * z * fx - 2 * w * fy + 2 * x * fz, -2 * z * fy + 2 * y * fz,
      2 * y * fx - 4 * x * fy - 2 * w * fz, 2 * x * fx + 2 * z * fz,
      2 * w * fx - 4 * z * fy + 2 * y * fz, 2 * z * fx - 2 * x * fz,
      2 * z * fx + 2 * w * fy - 4 * x * fz, -2 * w * fx + 2 * z * fy - 4 * y * fz,
      2 * x * fx + 2 * y * fy, -2 * y * fx + 2 * x * fy;
  return j;
}

// qdot = 0.5 * omega_matrix(w) * q
Eigen::Matrix4d omega_matrix(const Eigen::Ref<const Vector3>& w) {
  Eigen::Matrix4d m;
  m << 0, w[2], -w[1], w[0],
      -w[2], 0, w[0], w[1],
      w[1], -w[0], 0, w[2],
      -w[0], -w[1], -w[2], 0;
  return m;
}

Matrix3 euler_rate_jacobian(const Eigen::Ref<const Vector3>& w, const InertialParams& t) {
  const double a = t.ixx, b = t.iyy, c = t.izz;
  Matrix3 j;
  j << 0, -(c - b) * w[2] / a, -(c - b) * w[1] / a,
      -(a - c) * w[2] / b, 0, -(a - c) * w[0] / b,
      -(b - a) * w[1] / c, -(b - a) * w[0] / c, 0;
  return j;
}

// d(wdot)/d(Ixx, Iyy, Izz) given the already evaluated wdot.
Matrix3 euler_param_jacobian(const Eigen::Ref<const Vector3>& w,
                             const Eigen::Ref<const Vector3>& wdot,
                             const InertialParams& t) {
  const double a = t.ixx, b = t.iyy, c = t.izz;
  Matrix3 j;
  j << -wdot[0] / a, w[1] * w[2] / a, -w[1] * w[2] / a,
      -w[2] * w[0] / b, -wdot[1] / b, w[2] * w[0] / b,
      w[0] * w[1] / c, -w[0] * w[1] / c, -wdot[2] / c;
  return j;
}

}  // namespace

StateJacobian state_jacobian(const RigidBodyState& x, const ControlInput& u,
                             const InertialParams& theta, const DynamicsOptions& opts) {
  theta.validate();
  StateJacobian a = StateJacobian::Zero();
  a.block<3, 3>(idx::kPos, idx::kVel).setIdentity();
  a.block<4, 4>(idx::kQuat, idx::kQuat) = 0.5 * omega_matrix(x.w());
  a.block<4, 3>(idx::kQuat, idx::kOmega) = 0.5 * quat::hbar(x.q()).transpose();
  if (opts.force_frame == ForceFrame::kBody) {
    a.block<3, 4>(idx::kVel, idx::kQuat) = rotated_force_jacobian(x.q(), u.force) / theta.mass;
  }
  a.block<3, 3>(idx::kOmega, idx::kOmega) = euler_rate_jacobian(x.w(), theta);
  return a;
}

SensitivityMatrix param_jacobian(const RigidBodyState& x, const ControlInput& u,
                                 const InertialParams& theta, const DynamicsOptions& opts) {
  const StateDerivative xdot = deriv(x, u, theta, opts);
  SensitivityMatrix b = SensitivityMatrix::Zero();
  b.block<3, 1>(idx::kVel, 0) = -xdot.segment<3>(idx::kVel) / theta.mass;
  b.block<3, 3>(idx::kOmega, 1) =
      euler_param_jacobian(x.w(), xdot.segment<3>(idx::kOmega), theta);
  return b;
}

namespace detail {

void augmented_deriv(const StateVector& x, const SensitivityMatrix& phi,
                     const Vector6& u, const InertialParams& theta,
                     const DynamicsOptions& opts, StateVector& xdot,
                     SensitivityMatrix& phidot) {
  deriv_unchecked(x, u, theta, opts, xdot);

  // Column-wise scalar form of A(x) phi + B(x); this is the hot loop of the
  // planner.
  const double qx = x[idx::kQuat], qy = x[idx::kQuat + 1];
  const double qz = x[idx::kQuat + 2], qw = x[idx::kQuat + 3];
  const double wx = x[idx::kOmega], wy = x[idx::kOmega + 1], wz = x[idx::kOmega + 2];
  const double inv_m = 1.0 / theta.mass;
  const bool body = opts.force_frame == ForceFrame::kBody;
  const Matrix34 jf = body ? Matrix34(rotated_force_jacobian(x.segment<4>(idx::kQuat),
                                                             u.head<3>()) * inv_m)
                           : Matrix34::Zero();
  const Matrix3 je = euler_rate_jacobian(x.segment<3>(idx::kOmega), theta);

  for (int j = 0; j < kParamDim; ++j) {
    const double* p = phi.col(j).data();
    double* d = phidot.col(j).data();
    const double p0 = p[idx::kQuat], p1 = p[idx::kQuat + 1];
    const double p2 = p[idx::kQuat + 2], p3 = p[idx::kQuat + 3];
    const double r0 = p[idx::kOmega], r1 = p[idx::kOmega + 1], r2 = p[idx::kOmega + 2];

    d[idx::kPos] = p[idx::kVel];
    d[idx::kPos + 1] = p[idx::kVel + 1];
    d[idx::kPos + 2] = p[idx::kVel + 2];

    d[idx::kQuat] = 0.5 * ((wz * p1 - wy * p2 + wx * p3) + (qw * r0 - qz * r1 + qy * r2));
    d[idx::kQuat + 1] = 0.5 * ((-wz * p0 + wx * p2 + wy * p3) + (qz * r0 + qw * r1 - qx * r2));
    d[idx::kQuat + 2] = 0.5 * ((wy * p0 - wx * p1 + wz * p3) + (-qy * r0 + qx * r1 + qw * r2));
    d[idx::kQuat + 3] = 0.5 * ((-wx * p0 - wy * p1 - wz * p2) + (-qx * r0 - qy * r1 - qz * r2));

    for (int i = 0; i < 3; ++i) {
      d[idx::kVel + i] = jf(i, 0) * p0 + jf(i, 1) * p1 + jf(i, 2) * p2 + jf(i, 3) * p3;
      d[idx::kOmega + i] = je(i, 0) * r0 + je(i, 1) * r1 + je(i, 2) * r2;
    }
  }
  phidot.block<3, 1>(idx::kVel, 0) -= xdot.segment<3>(idx::kVel) * inv_m;
  phidot.block<3, 3>(idx::kOmega, 1) +=
      euler_param_jacobian(x.segment<3>(idx::kOmega), xdot.segment<3>(idx::kOmega), theta);
}

void joint_step(StateVector& x, SensitivityMatrix& phi, const Vector6& u,
                const InertialParams& theta, double dt, const DynamicsOptions& opts) {
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;

  StateVector k1, k2, k3, k4, tmp;
  SensitivityMatrix p1, p2, p3, p4, ptmp;
  augmented_deriv(x, phi, u, theta, opts, k1, p1);
  tmp = x + half * k1;
  ptmp = phi + half * p1;
  augmented_deriv(tmp, ptmp, u, theta, opts, k2, p2);
  tmp = x + half * k2;
  ptmp = phi + half * p2;
  augmented_deriv(tmp, ptmp, u, theta, opts, k3, p3);
  tmp = x + dt * k3;
  ptmp = phi + dt * p3;
  augmented_deriv(tmp, ptmp, u, theta, opts, k4, p4);

  x = x + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  phi += sixth * (p1 + 2.0 * p2 + 2.0 * p3 + p4);

  const double n = x.segment<4>(idx::kQuat).norm();
  x.segment<4>(idx::kQuat) /= n;
  const Vector4 qn = x.segment<4>(idx::kQuat);
  const Eigen::Matrix<double, 4, kParamDim> pq = phi.middleRows<4>(idx::kQuat);
  phi.middleRows<4>(idx::kQuat) = (pq - qn * (qn.transpose() * pq)) / n;
}

}  // namespace detail

SensitivityMatrix sensitivity_deriv(const RigidBodyState& x, const SensitivityMatrix& phi,
                                    const ControlInput& u, const InertialParams& theta,
                                    const DynamicsOptions& opts) {
  theta.validate();
  if (!x.all_finite() || !phi.allFinite()) {
    throw InvalidArgument("sensitivity_deriv: non-finite state or sensitivity");
  }
  StateVector xdot;
  SensitivityMatrix phidot;
  detail::augmented_deriv(x.x, phi, u.as_vector(), theta, opts, xdot, phidot);
  return phidot;
}

Eigen::MatrixXd sensitivity_deriv(const RigidBodyState& x, const Eigen::MatrixXd& phi,
                                  const ControlInput& u, const InertialParams& theta,
                                  const DynamicsOptions& opts) {
  if (phi.rows() != kStateDim || phi.cols() != kParamDim) {
    throw InvalidArgument("sensitivity matrix must be 13x4, got " +
                          std::to_string(phi.rows()) + "x" + std::to_string(phi.cols()));
  }
  const SensitivityMatrix fixed = phi;
  return sensitivity_deriv(x, fixed, u, theta, opts);
}

JointState propagate_joint(const RigidBodyState& x, const SensitivityMatrix& phi,
                           const ControlInput& u, const InertialParams& theta, double dt,
                           const DynamicsOptions& opts) {
  detail::validate_step_inputs(x, u, theta, dt);
  if (!phi.allFinite()) throw InvalidArgument("sensitivity has non-finite entries");
  JointState out{x, phi};
  detail::joint_step(out.x.x, out.phi, u.as_vector(), theta, dt, opts);
  return out;
}

JointState propagate_joint_interval(const RigidBodyState& x, const SensitivityMatrix& phi,
                                    const ControlInput& u, const InertialParams& theta,
                                    double interval, int substeps,
                                    const DynamicsOptions& opts) {
  if (substeps < 1) throw InvalidArgument("substeps must be at least 1");
  const double dt = interval / substeps;
  detail::validate_step_inputs(x, u, theta, dt);
  if (!phi.allFinite()) throw InvalidArgument("sensitivity has non-finite entries");
  JointState out{x, phi};
  const Vector6 uv = u.as_vector();
  for (int i = 0; i < substeps; ++i) detail::joint_step(out.x.x, out.phi, uv, theta, dt, opts);
  return out;
}

HMatrix output_sensitivity(const SensitivityMatrix& phi) {
  HMatrix h;
  h.topRows<3>() = phi.middleRows<3>(idx::kVel);
  h.bottomRows<3>() = phi.middleRows<3>(idx::kOmega);
  return h;
}

}  // namespace infoplan
