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
#include <gtest/gtest.h>

#include "infoplan/selftest.hpp"

namespace infoplan {
namespace {

// Library derivative with the gyroscopic term of Euler's equation negated.
DerivativeFn sign_flipped_euler() {
  const DerivativeFn lib = library_derivative();
  return [lib](const StateVector& x, const Vector6& u, const InertialParams& theta,
               StateVector& xdot) {
    lib(x, u, theta, xdot);
    const Vector3 w = x.segment<3>(idx::kOmega);
    const Vector3 iw(theta.ixx * w[0], theta.iyy * w[1], theta.izz * w[2]);
    const Vector3 gyro = w.cross(iw);
    xdot.segment<3>(idx::kOmega) +=
        2.0 * Vector3(gyro[0] / theta.ixx, gyro[1] / theta.iyy, gyro[2] / theta.izz);
  };
}

TEST(Selftest, LibraryDerivativePassesConservation) {
  EXPECT_TRUE(check_momentum_conservation(library_derivative()).passed);
  EXPECT_TRUE(check_energy_conservation(library_derivative()).passed);
}

TEST(Selftest, MutatedEulerEquationIsCaught) {
  const SelftestCheck c = check_momentum_conservation(sign_flipped_euler());
  EXPECT_FALSE(c.passed) << c.detail;
}

TEST(Selftest, AllChecksPass) {
  const SelftestReport r = selftest();
  EXPECT_GE(r.checks.size(), 8u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  EXPECT_TRUE(r.all_passed());
  const std::string text = r.format();
  for (const auto& c : r.checks) EXPECT_NE(text.find(c.name), std::string::npos);
}

}  // namespace
}  // namespace infoplan
