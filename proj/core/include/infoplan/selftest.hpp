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
#ifndef INFOPLAN_SELFTEST_HPP_
#define INFOPLAN_SELFTEST_HPP_

#include <functional>
#include <string>
#include <vector>

#include "infoplan/dynamics.hpp"

namespace infoplan {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool all_passed() const;
  std::string format() const;
};

// Continuous dynamics under test, in the shape of detail::deriv_unchecked.
using DerivativeFn = std::function<void(const StateVector& x, const Vector6& u,
                                        const InertialParams& theta, StateVector& xdot)>;
DerivativeFn library_derivative();

// Conservation checks integrate f torque-free for 10 s at dt = 0.01 with
// I = diag(7, 7, 10) and a fixed tumbling initial rate. Passing a mutated
// f (for instance a sign-flipped gyroscopic term) must make the momentum
// check fail.
SelftestCheck check_momentum_conservation(const DerivativeFn& f);
SelftestCheck check_energy_conservation(const DerivativeFn& f);

// The fast property suite.
SelftestReport selftest();

}  // namespace infoplan

#endif  // INFOPLAN_SELFTEST_HPP_
