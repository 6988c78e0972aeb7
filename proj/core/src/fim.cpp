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
#include "infoplan/fim.hpp"

#include <cmath>
#include <string>

#include "infoplan/error.hpp"

namespace infoplan {

Fim::Fim(const FimMatrix& m) : m_(0.5 * (m + m.transpose())) {
  if (!m_.allFinite()) throw NumericalError("FIM has non-finite entries");
}

double Fim::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<FimMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Fim Fim::accumulate(const HMatrix& h, const Vector6& sigma_diag) const {
  for (int i = 0; i < kMeasDim; ++i) {
    if (!(sigma_diag[i] > 0.0) || !std::isfinite(sigma_diag[i])) {
      throw InvalidArgument("measurement covariance must be positive definite (entry " +
                            std::to_string(i) + " = " + std::to_string(sigma_diag[i]) + ")");
    }
  }
  if (!h.allFinite()) throw InvalidArgument("output sensitivity has non-finite entries");
  Fim out = *this;
  detail::accumulate_into(out.m_, h, sigma_diag.cwiseInverse());
  return out;
}

double a_optimality(const Fim& f, double ridge, const ParamMask& mask) {
  if (!(ridge > 0.0)) {
    throw InvalidArgument("a_optimality ridge must be positive, got " + std::to_string(ridge));
  }
  return detail::a_optimality_unchecked(f.matrix(), ridge, mask);
}

namespace detail {

void accumulate_into(FimMatrix& f, const HMatrix& h, const Vector6& inv_sigma) {
  const HMatrix wh = inv_sigma.asDiagonal() * h;
  f.noalias() += h.transpose() * wh;
  f = 0.5 * (f + f.transpose()).eval();
}

double a_optimality_unchecked(const FimMatrix& f, double ridge, const ParamMask& mask) {
  const FimMatrix inv = (f + ridge * FimMatrix::Identity()).inverse();
  double tr = 0.0;
  for (int i = 0; i < kParamDim; ++i) {
    if (mask[i]) tr += inv(i, i);
  }
  return tr;
}

}  // namespace detail
}  // namespace infoplan
