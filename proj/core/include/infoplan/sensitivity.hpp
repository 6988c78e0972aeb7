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
#ifndef INFOPLAN_SENSITIVITY_HPP_
#define INFOPLAN_SENSITIVITY_HPP_

#include <Eigen/Dense>

#include "infoplan/dynamics.hpp"

namespace infoplan {

// phi = dx/dtheta, one column per parameter (m, Ixx, Iyy, Izz).
using SensitivityMatrix = Eigen::Matrix<double, kStateDim, kParamDim>;
// Output sensitivity dy/dtheta for the velocity measurement model.
using HMatrix = Eigen::Matrix<double, kMeasDim, kParamDim>;
using StateJacobian = Eigen::Matrix<double, kStateDim, kStateDim>;

struct JointState {
  RigidBodyState x;
  SensitivityMatrix phi = SensitivityMatrix::Zero();
};

// Analytic df/dx and df/dtheta of the rigid-body dynamics.
StateJacobian state_jacobian(const RigidBodyState& x, const ControlInput& u,
                             const InertialParams& theta,
                             const DynamicsOptions& opts = {});
SensitivityMatrix param_jacobian(const RigidBodyState& x, const ControlInput& u,
                                 const InertialParams& theta,
                                 const DynamicsOptions& opts = {});

// phidot = df/dx * phi + df/dtheta.
SensitivityMatrix sensitivity_deriv(const RigidBodyState& x,
                                    const SensitivityMatrix& phi,
                                    const ControlInput& u,
                                    const InertialParams& theta,
                                    const DynamicsOptions& opts = {});
// Dynamically sized variant; throws InvalidArgument unless phi is 13x4.
Eigen::MatrixXd sensitivity_deriv(const RigidBodyState& x,
                                  const Eigen::MatrixXd& phi,
                                  const ControlInput& u,
                                  const InertialParams& theta,
                                  const DynamicsOptions& opts = {});

// One RK4 step of the augmented system (x, phi). The state part is computed
// with exactly the arithmetic of step(), so the two agree bit for bit. The
// quaternion rows of phi are mapped through the derivative of the
// renormalization so phi stays the exact derivative of the discrete map.
JointState propagate_joint(const RigidBodyState& x, const SensitivityMatrix& phi,
                           const ControlInput& u, const InertialParams& theta,
                           double dt, const DynamicsOptions& opts = {});

JointState propagate_joint_interval(const RigidBodyState& x,
                                    const SensitivityMatrix& phi,
                                    const ControlInput& u,
                                    const InertialParams& theta, double interval,
                                    int substeps, const DynamicsOptions& opts = {});

// H = dh/dtheta + dh/dx * phi. For h(x) = (v, w) this is the six velocity
// rows of phi.
HMatrix output_sensitivity(const SensitivityMatrix& phi);

namespace detail {
void augmented_deriv(const StateVector& x, const SensitivityMatrix& phi,
                     const Vector6& u, const InertialParams& theta,
                     const DynamicsOptions& opts, StateVector& xdot,
                     SensitivityMatrix& phidot);
// Unchecked joint RK4 step used by the planner's inner loop.
void joint_step(StateVector& x, SensitivityMatrix& phi, const Vector6& u,
                const InertialParams& theta, double dt, const DynamicsOptions& opts);
}  // namespace detail

}  // namespace infoplan

#endif  // INFOPLAN_SENSITIVITY_HPP_
