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

// Independent reference computations shared by unit and acceptance tests.
// Nothing here calls the code path it is used to check.
#ifndef INFOPLAN_TESTS_ORACLES_HPP_
#define INFOPLAN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "infoplan/dynamics.hpp"
#include "infoplan/sensitivity.hpp"

namespace infoplan::oracle {

struct Trajectory {
  RigidBodyState x0;
  std::vector<ControlInput> controls;
  double interval = 0.1;
  int substeps = 10;
};

// Random 5 s arc: random attitude and rates, sinusoidal force and torque.
inline Trajectory random_trajectory(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Trajectory tr;
  const Vector3 axis = Vector3(unit(rng), unit(rng), unit(rng)).normalized();
  tr.x0 = RigidBodyState::from(Vector3(unit(rng), unit(rng), unit(rng)),
                               quat::from_axis_angle(axis, 3.0 * unit(rng)),
                               0.1 * Vector3(unit(rng), unit(rng), unit(rng)),
                               0.3 * Vector3(unit(rng), unit(rng), unit(rng)));
  Vector6 amp, freq, phase;
  for (int i = 0; i < 6; ++i) {
    amp[i] = (i < 3 ? 0.4 : 0.1) * (0.5 + 0.5 * std::abs(unit(rng)));
    freq[i] = 0.5 + std::abs(unit(rng));
    phase[i] = 3.0 * unit(rng);
  }
  for (int k = 0; k < 50; ++k) {
    const double t = k * tr.interval;
    Vector6 u;
    for (int i = 0; i < 6; ++i) u[i] = amp[i] * std::sin(freq[i] * t + phase[i]);
    tr.controls.push_back(ControlInput::from_vector(u));
  }
  return tr;
}

inline RigidBodyState simulate(const Trajectory& tr, const InertialParams& theta) {
  RigidBodyState x = tr.x0;
  for (const auto& u : tr.controls) x = integrate(x, u, theta, tr.interval, tr.substeps);
  return x;
}

// Central differences of the final state with respect to each parameter.
inline SensitivityMatrix fd_sensitivity(const Trajectory& tr, const InertialParams& theta,
                                        double rel_step = 1e-6) {
  SensitivityMatrix out;
  for (int j = 0; j < kParamDim; ++j) {
    Vector4 p = theta.as_vector(), m = theta.as_vector();
    const double h = rel_step * theta.as_vector()[j];
    p[j] += h;
    m[j] -= h;
    out.col(j) = (simulate(tr, InertialParams::from_vector(p)).x -
                  simulate(tr, InertialParams::from_vector(m)).x) /
                 (2.0 * h);
  }
  return out;
}

// Worst column-wise relative error of phi against the reference.
inline double max_column_rel_error(const SensitivityMatrix& phi, const SensitivityMatrix& ref) {
  double worst = 0.0;
  for (int j = 0; j < kParamDim; ++j) {
    const double scale = std::max(ref.col(j).norm(), 1e-12);
    worst = std::max(worst, (phi.col(j) - ref.col(j)).norm() / scale);
  }
  return worst;
}

// Exhaustive search over a box with nested refinement: a 41-point grid per
// axis, then repeated zooms around the incumbent.
inline double grid_minimum(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> lo, std::vector<double> hi, int levels = 5,
                           int points = 41) {
  const std::size_t dim = lo.size();
  std::vector<double> best_x(dim);
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < levels; ++level) {
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    for (;;) {
      for (std::size_t d = 0; d < dim; ++d) {
        x[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (points - 1);
      }
      const double v = f(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
      std::size_t d = 0;
      while (d < dim && ++idx[d] == points) idx[d++] = 0;
      if (d == dim) break;
    }
    const std::vector<double> olo = lo, ohi = hi;
    for (std::size_t d = 0; d < dim; ++d) {
      const double span = 2.0 * (ohi[d] - olo[d]) / (points - 1);
      lo[d] = std::max(olo[d], best_x[d] - span);
      hi[d] = std::min(ohi[d], best_x[d] + span);
    }
  }
  return best;
}

// Mass from noiseless thrust-only data: m = |f| dt / |dv| per step, averaged.
inline double least_squares_mass(const std::vector<Vector3>& forces,
                                 const std::vector<Vector3>& dv, double dt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < forces.size(); ++i) sum += forces[i].norm() * dt / dv[i].norm();
  return sum / static_cast<double>(forces.size());
}

}  // namespace infoplan::oracle

#endif  // INFOPLAN_TESTS_ORACLES_HPP_
