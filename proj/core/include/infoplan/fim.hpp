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
#ifndef INFOPLAN_FIM_HPP_
#define INFOPLAN_FIM_HPP_

#include <array>

#include <Eigen/Dense>

#include "infoplan/sensitivity.hpp"

namespace infoplan {

using FimMatrix = Eigen::Matrix<double, kParamDim, kParamDim>;

// Which parameters the information cost should care about.
using ParamMask = std::array<bool, kParamDim>;
inline constexpr ParamMask kAllParams = {true, true, true, true};

// Fisher information accumulator, F = sum_i H_i^T Sigma^-1 H_i.
class Fim {
 public:
  Fim() = default;
  explicit Fim(const FimMatrix& m);

  static Fim zero() { return Fim(); }

  const FimMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace(); }
  double min_eigenvalue() const;
  Fim scaled(double factor) const { return Fim(factor * m_); }

  // Returns F + H^T Sigma^-1 H, symmetrized. sigma_diag holds the diagonal
  // of the measurement covariance and must be strictly positive.
  Fim accumulate(const HMatrix& h, const Vector6& sigma_diag) const;

 private:
  FimMatrix m_ = FimMatrix::Zero();
};

inline Fim accumulate(const Fim& f, const HMatrix& h, const Vector6& sigma_diag) {
  return f.accumulate(h, sigma_diag);
}

// A-optimality: trace of (F + ridge I)^-1 restricted to the masked
// parameters (the marginal Cramer-Rao bounds of that subset).
double a_optimality(const Fim& f, double ridge, const ParamMask& mask = kAllParams);

namespace detail {
// Unchecked in-place accumulation with a precomputed inverse covariance.
void accumulate_into(FimMatrix& f, const HMatrix& h, const Vector6& inv_sigma);
double a_optimality_unchecked(const FimMatrix& f, double ridge, const ParamMask& mask);
}  // namespace detail

}  // namespace infoplan

#endif  // INFOPLAN_FIM_HPP_
