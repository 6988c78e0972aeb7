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
#include "infoplan/dynamics.hpp"

#include <cmath>
#include <string>

#include "infoplan/error.hpp"

namespace infoplan {

RigidBodyState RigidBodyState::from(const Vector3& r, const Vector4& q,
                                    const Vector3& v, const Vector3& w) {
  RigidBodyState s;
  s.r() = r;
  s.q() = q;
  s.v() = v;
  s.w() = w;
  return s;
}

void InertialParams::validate() const {
  const Vector4 p = as_vector();
  for (int i = 0; i < kParamDim; ++i) {
    if (!std::isfinite(p[i]) || p[i] <= 0.0) {
      throw InvalidArgument("inertial parameters must be finite and positive, got (" +
                            std::to_string(mass) + ", " + std::to_string(ixx) + ", " +
                            std::to_string(iyy) + ", " + std::to_string(izz) + ")");
    }
  }
}

bool InertialParams::violates_triangle_inequality() const {
  return ixx + iyy < izz || iyy + izz < ixx || izz + ixx < iyy;
}

void NoiseSpec::validate() const {
  if (!measurement_var.allFinite() || (measurement_var.array() < 0.0).any() ||
      !process_var.allFinite() || (process_var.array() < 0.0).any()) {
    throw InvalidArgument("noise variances must be finite and non-negative");
  }
}

namespace quat {

Matrix3 rotation(const Vector4& q) {
  const double x = q[0], y = q[1], z = q[2], w = q[3];
  Matrix3 r;
  r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w),
      2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w),
      2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y);
  return r;
}

Vector4 multiply(const Vector4& a, const Vector4& b) {
  const Vector3 av = a.head<3>();
  const Vector3 bv = b.head<3>();
  Vector4 out;
  out.head<3>() = a[3] * bv + b[3] * av + av.cross(bv);
  out[3] = a[3] * b[3] - av.dot(bv);
  return out;
}

Vector4 conjugate(const Vector4& q) { return {-q[0], -q[1], -q[2], q[3]}; }

Vector4 from_axis_angle(const Vector3& axis, double angle) {
  const Vector3 n = axis.normalized();
  const double s = std::sin(0.5 * angle);
  return {n[0] * s, n[1] * s, n[2] * s, std::cos(0.5 * angle)};
}

Eigen::Matrix<double, 3, 4> hbar(const Vector4& q) {
  const double x = q[0], y = q[1], z = q[2], w = q[3];
  Eigen::Matrix<double, 3, 4> h;
  h << w, z, -y, -x,
      -z, w, x, -y,
      y, -x, w, -z;
  return h;
}

}  // namespace quat

namespace detail {

void deriv_unchecked(const StateVector& x, const Vector6& u,
                     const InertialParams& theta, const DynamicsOptions& opts,
                     StateVector& xdot) {
  const double qx = x[idx::kQuat], qy = x[idx::kQuat + 1];
  const double qz = x[idx::kQuat + 2], qw = x[idx::kQuat + 3];
  const double wx = x[idx::kOmega], wy = x[idx::kOmega + 1], wz = x[idx::kOmega + 2];

  xdot.segment<3>(idx::kPos) = x.segment<3>(idx::kVel);

  // qdot = 0.5 * q (x) [w, 0]
  xdot[idx::kQuat] = 0.5 * (qw * wx - qz * wy + qy * wz);
  xdot[idx::kQuat + 1] = 0.5 * (qz * wx + qw * wy - qx * wz);
  xdot[idx::kQuat + 2] = 0.5 * (-qy * wx + qx * wy + qw * wz);
  xdot[idx::kQuat + 3] = 0.5 * (-qx * wx - qy * wy - qz * wz);

  const double inv_m = 1.0 / theta.mass;
  if (opts.force_frame == ForceFrame::kBody) {
    const Matrix3 rot = quat::rotation(x.segment<4>(idx::kQuat));
    xdot.segment<3>(idx::kVel) = (rot * u.head<3>()) * inv_m;
  } else {
    xdot.segment<3>(idx::kVel) = u.head<3>() * inv_m;
  }

  const double a = theta.ixx, b = theta.iyy, c = theta.izz;
  xdot[idx::kOmega] = (u[3] - (c - b) * wy * wz) / a;
  xdot[idx::kOmega + 1] = (u[4] - (a - c) * wz * wx) / b;
  xdot[idx::kOmega + 2] = (u[5] - (b - a) * wx * wy) / c;
}

void validate_step_inputs(const RigidBodyState& x, const ControlInput& u,
                          const InertialParams& theta, double dt) {
  theta.validate();
  if (!x.all_finite()) throw InvalidArgument("state has non-finite components");
  if (!u.force.allFinite() || !u.torque.allFinite()) {
    throw InvalidArgument("control input has non-finite components");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("integration step must be positive, got " + std::to_string(dt));
  }
}

}  // namespace detail

StateDerivative deriv(const RigidBodyState& x, const ControlInput& u,
                      const InertialParams& theta, const DynamicsOptions& opts) {
  theta.validate();
  if (!x.all_finite()) throw InvalidArgument("state has non-finite components");
  if (!u.force.allFinite() || !u.torque.allFinite()) {
    throw InvalidArgument("control input has non-finite components");
  }
  StateDerivative xdot;
  detail::deriv_unchecked(x.x, u.as_vector(), theta, opts, xdot);
  return xdot;
}

RigidBodyState step(const RigidBodyState& x, const ControlInput& u,
                    const InertialParams& theta, double dt,
                    const DynamicsOptions& opts) {
  detail::validate_step_inputs(x, u, theta, dt);
  const Vector6 uv = u.as_vector();
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;

  StateVector k1, k2, k3, k4, tmp;
  detail::deriv_unchecked(x.x, uv, theta, opts, k1);
  tmp = x.x + half * k1;
  detail::deriv_unchecked(tmp, uv, theta, opts, k2);
  tmp = x.x + half * k2;
  detail::deriv_unchecked(tmp, uv, theta, opts, k3);
  tmp = x.x + dt * k3;
  detail::deriv_unchecked(tmp, uv, theta, opts, k4);

  RigidBodyState out;
  out.x = x.x + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.q() /= out.q().norm();
  return out;
}

RigidBodyState integrate(const RigidBodyState& x, const ControlInput& u,
                         const InertialParams& theta, double interval,
                         int substeps, const DynamicsOptions& opts) {
  if (substeps < 1) throw InvalidArgument("substeps must be at least 1");
  const double dt = interval / substeps;
  RigidBodyState s = x;
  for (int i = 0; i < substeps; ++i) s = step(s, u, theta, dt, opts);
  return s;
}

Measurement measure(const RigidBodyState& x, const NoiseSpec& noise, Rng& rng) {
  Vector6 y;
  y << x.v(), x.w();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < kMeasDim; ++i) {
    // Always draw so the stream position does not depend on which
    // channels are noiseless.
    const double n = normal(rng);
    if (noise.measurement_var[i] > 0.0) y[i] += std::sqrt(noise.measurement_var[i]) * n;
  }
  return Measurement::from_vector(y);
}

PlanarState planar_reduce(const RigidBodyState& x, bool strict) {
  const Vector4 q = x.q();
  if (strict) {
    const double tilt = std::hypot(q[0], q[1]);
    if (tilt > 1e-6) {
      throw InvalidArgument("state has off-plane rotation (|qx,qy| = " +
                            std::to_string(tilt) + ")");
    }
  }
  PlanarState p;
  p.rx = x.r()[0];
  p.ry = x.r()[1];
  p.heading = std::atan2(2.0 * (q[3] * q[2] + q[0] * q[1]),
                         1.0 - 2.0 * (q[1] * q[1] + q[2] * q[2]));
  p.vx = x.v()[0];
  p.vy = x.v()[1];
  p.wz = x.w()[2];
  return p;
}

Vector3 angular_momentum_inertial(const RigidBodyState& x,
                                  const InertialParams& theta) {
  const Vector3 iw(theta.ixx * x.w()[0], theta.iyy * x.w()[1], theta.izz * x.w()[2]);
  return quat::rotation(x.q()) * iw;
}

double rotational_energy(const RigidBodyState& x, const InertialParams& theta) {
  const Vector3 w = x.w();
  return 0.5 * (theta.ixx * w[0] * w[0] + theta.iyy * w[1] * w[1] + theta.izz * w[2] * w[2]);
}

}  // namespace infoplan
