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
#include <random>

#include <gtest/gtest.h>

#include "infoplan/error.hpp"
#include "infoplan/fim.hpp"

namespace infoplan {
namespace {

HMatrix random_h(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  HMatrix h;
  for (int i = 0; i < h.size(); ++i) h.data()[i] = n(rng);
  return h;
}

TEST(Fim, ZeroHLeavesFimUnchanged) {
  const Fim f(FimMatrix::Identity() * 2.0);
  EXPECT_EQ(f.accumulate(HMatrix::Zero(), Vector6::Ones()).matrix(), f.matrix());
}

TEST(Fim, IdentityArithmetic) {
  HMatrix h = HMatrix::Zero();
  h.topRows<4>() = Eigen::Matrix4d::Identity();
  EXPECT_EQ(Fim().accumulate(h, Vector6::Ones()).matrix(), FimMatrix::Identity());
}

TEST(Fim, AccumulateMatchesFormula) {
  std::mt19937_64 rng(1);
  const HMatrix h = random_h(rng);
  Vector6 sigma;
  sigma << 1e-6, 2e-6, 1e-5, 1e-4, 3e-6, 1e-6;
  const FimMatrix expect = h.transpose() * sigma.cwiseInverse().asDiagonal() * h;
  const FimMatrix got = Fim().accumulate(h, sigma).matrix();
  EXPECT_LT((got - expect).norm(), 1e-12 * expect.norm());
  EXPECT_EQ(got, got.transpose());
}

TEST(Fim, AdditiveOverSplits) {
  std::mt19937_64 rng(2);
  std::vector<HMatrix> hs;
  for (int i = 0; i < 12; ++i) hs.push_back(random_h(rng));
  const Vector6 sigma = Vector6::Constant(0.5);
  Fim all, first, second;
  for (const auto& h : hs) all = all.accumulate(h, sigma);
  for (int i = 0; i < 5; ++i) first = first.accumulate(hs[i], sigma);
  for (int i = 5; i < 12; ++i) second = second.accumulate(hs[i], sigma);
  EXPECT_LT((all.matrix() - (first.matrix() + second.matrix())).norm(), 1e-12 * all.matrix().norm());
}

TEST(Fim, StaysPositiveSemidefinite) {
  std::mt19937_64 rng(3);
  Fim f;
  for (int i = 0; i < 50; ++i) {
    f = f.accumulate(random_h(rng) * 1e-3, Vector6::Constant(1e-6));
    EXPECT_GE(f.min_eigenvalue(), -1e-10);
    EXPECT_LT((f.matrix() - f.matrix().transpose()).norm(), 1e-12 * f.matrix().norm());
  }
}

TEST(Fim, RejectsNonPositiveNoise) {
  EXPECT_THROW(Fim().accumulate(HMatrix::Zero(), Vector6::Zero()), InvalidArgument);
}

TEST(AOptimality, DiagonalInverse) {
  FimMatrix f = FimMatrix::Identity();
  f(0, 0) = 4.0;
  EXPECT_NEAR(a_optimality(Fim(f), 1e-12), 3.25, 1e-10);
}

TEST(AOptimality, RidgeOnly) {
  EXPECT_NEAR(a_optimality(Fim(), 1e-3), 4000.0, 1e-9);
}

TEST(AOptimality, MaskSelectsParameters) {
  FimMatrix f = FimMatrix::Identity();
  f(0, 0) = 4.0;
  f(3, 3) = 2.0;
  EXPECT_NEAR(a_optimality(Fim(f), 1e-12, {true, false, false, true}), 0.25 + 0.5, 1e-10);
}

TEST(AOptimality, RejectsNonPositiveRidge) {
  EXPECT_THROW(a_optimality(Fim(), 0.0), InvalidArgument);
}

TEST(AOptimality, MonotoneUnderPsdIncrements) {
  std::mt19937_64 rng(4);
  Fim f;
  double prev = a_optimality(f, 1e-3);
  for (int i = 0; i < 200; ++i) {
    HMatrix h = HMatrix::Zero();
    h.row(i % 6) = random_h(rng).row(0);
    f = f.accumulate(h, Vector6::Constant(10.0));
    const double now = a_optimality(f, 1e-3);
    EXPECT_LE(now, prev * (1.0 + 1e-12));
    prev = now;
  }
}

}  // namespace
}  // namespace infoplan
