// Copyright 2026 The queuegrad Authors
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

#include "queuegrad/instances.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "queuegrad/errors.hpp"
#include "queuegrad/solvers.hpp"

namespace queuegrad {
namespace {

bool same_spec(const ProblemSpec& a, const ProblemSpec& b) {
  if (a.index() != b.index()) return false;
  if (const auto* la = std::get_if<LpSpec>(&a)) {
    const auto& lb = std::get<LpSpec>(b);
    return la->c == lb.c && la->A == lb.A && la->b == lb.b &&
           la->lower == lb.lower && la->upper == lb.upper;
  }
  const auto& qa = std::get<QpSpec>(a);
  const auto& qb = std::get<QpSpec>(b);
  return qa.P == qb.P && qa.c == qb.c && qa.A == qb.A && qa.b == qb.b &&
         qa.Q == qb.Q && qa.d == qb.d && qa.e == qb.e && qa.lower == qb.lower &&
         qa.upper == qb.upper;
}

TEST(BuildLpTest, ReferenceInstanceConstants) {
  const BuiltProgram built = build_lp(paper_lp_instance());
  EXPECT_DOUBLE_EQ(built.constants.constraint_lipschitz, std::sqrt(257.0));
  EXPECT_DOUBLE_EQ(built.constants.objective_smoothness, 0.0);
  EXPECT_DOUBLE_EQ(built.constants.diameter, 20.0);
  EXPECT_DOUBLE_EQ(built.constants.max_step, 1.0 / 257.0);
  EXPECT_DOUBLE_EQ(select_gamma(built.constants), 1.0 / 257.0);
}

TEST(BuildLpTest, ZeroData) {
  LpSpec spec;
  spec.c = Vector::Zero(2);
  spec.A = Matrix::Zero(1, 2);
  spec.b = Vector::Zero(1);
  spec.lower = Vector::Zero(2);
  spec.upper = Vector::Ones(2);
  const BuiltProgram built = build_lp(spec);
  EXPECT_EQ(built.constants.constraint_lipschitz, 0.0);
  EXPECT_EQ(built.constants.objective_smoothness, 0.0);
}

TEST(BuildLpTest, OneByOne) {
  LpSpec spec;
  spec.c = Vector{{1.0}};
  spec.A = Matrix{{2.0}};
  spec.b = Vector{{1.0}};
  spec.lower = Vector::Zero(1);
  spec.upper = Vector::Ones(1);
  const BuiltProgram built = build_lp(spec);
  EXPECT_DOUBLE_EQ(built.constants.constraint_lipschitz, 2.0);
  EXPECT_DOUBLE_EQ(built.constants.max_step, 0.25);
}

TEST(BuildLpTest, StepRuleWithLinearConstraints) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto spec = std::get<LpSpec>(random_instance(Family::kLp, 3, 2, seed));
    const ConstantsPack& c = build_lp(spec).constants;
    EXPECT_EQ(c.constraint_smoothness_norm, 0.0);
    EXPECT_EQ(c.max_step,
              1.0 / (c.constraint_lipschitz * c.constraint_lipschitz + c.objective_smoothness));
  }
}

TEST(BuildLpTest, RejectsMismatchedData) {
  LpSpec spec = paper_lp_instance();
  spec.b = Vector::Zero(2);
  EXPECT_THROW(build_lp(spec), InvalidInput);
}

TEST(BuildQpTest, ReferenceDiameter) {
  const BuiltProgram built = build_qp(paper_qp_instance());
  EXPECT_NEAR(built.constants.diameter, 5.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(built.program.num_constraints(), 3);
}

TEST(BuildQpTest, AcceptsMultiplierBound) {
  const BuiltProgram built = build_qp(paper_qp_instance(), 50.0);
  ASSERT_TRUE(built.constants.multiplier_bound.has_value());
  EXPECT_EQ(*built.constants.multiplier_bound, 50.0);
  EXPECT_TRUE(built.constants.complete());
  EXPECT_GT(select_gamma(built.constants), 0.0);
}

TEST(BuildQpTest, NoMultiplierBoundMeansNoAutoStep) {
  const BuiltProgram built = build_qp(paper_qp_instance());
  EXPECT_THROW(select_gamma(built.constants), ConfigurationError);
}

// With P = Q = 0 the QP is the LP with one more linear row d^T x <= e. The
// smoothness data agree exactly; the QP's triangle-inequality beta, C and R
// are looser but still valid bounds, so they dominate the LP values.
TEST(BuildQpTest, VanishingQuadraticsMatchLp) {
  const LpSpec lp = paper_lp_instance();
  QpSpec qp;
  qp.P = Matrix::Zero(4, 4);
  qp.c = lp.c;
  qp.A = lp.A;
  qp.b = lp.b;
  qp.Q = Matrix::Zero(4, 4);
  qp.d = Vector{{1.0, 1.0, 1.0, 1.0}};
  qp.e = 30.0;
  qp.lower = lp.lower;
  qp.upper = lp.upper;
  LpSpec stacked = lp;
  stacked.A.conservativeResize(4, 4);
  stacked.A.row(3) = qp.d.transpose();
  stacked.b.conservativeResize(4);
  stacked.b[3] = qp.e;

  const ConstantsPack a = build_qp(qp).constants;
  const ConstantsPack b = build_lp(stacked).constants;
  EXPECT_EQ(a.objective_smoothness, b.objective_smoothness);
  EXPECT_EQ(a.constraint_smoothness, b.constraint_smoothness);
  EXPECT_EQ(a.constraint_smoothness_norm, 0.0);
  EXPECT_GE(a.constraint_lipschitz, b.constraint_lipschitz);
  EXPECT_GE(a.constraint_bound, b.constraint_bound);
  EXPECT_GE(a.diameter, b.diameter);
  const Vector x = Vector::Constant(4, 2.5);
  EXPECT_NEAR((build_qp(qp).program.constraint_values(x) -
               build_lp(stacked).program.constraint_values(x)).norm(),
              0.0, 1e-12);
}

TEST(QpSpecTest, RejectsNonPsdAndAsymmetric) {
  QpSpec spec = paper_qp_instance();
  spec.Q = Matrix{{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_THROW(spec.validate(), InvalidInput);
  spec = paper_qp_instance();
  spec.P(0, 1) = 3.0;
  EXPECT_THROW(spec.validate(), InvalidInput);
}

TEST(RandomInstanceTest, SameSeedSameSpec) {
  for (const Family family : {Family::kLp, Family::kQp}) {
    EXPECT_TRUE(same_spec(random_instance(family, 4, 3, 99), random_instance(family, 4, 3, 99)));
    EXPECT_FALSE(same_spec(random_instance(family, 4, 3, 99), random_instance(family, 4, 3, 100)));
  }
}

TEST(RandomInstanceTest, BoxCenterStrictlyFeasible) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const Family family : {Family::kLp, Family::kQp}) {
      const ProblemSpec spec = random_instance(family, 1 + static_cast<int>(seed % 5),
                                               1 + static_cast<int>(seed % 4), seed);
      const BuiltProgram built = build(spec);
      const Vector center = built.program.box().center();
      EXPECT_LT(built.program.constraint_values(center).maxCoeff(), 0.0);
      EXPECT_TRUE(estimate_multiplier_bound(spec).has_value());
    }
  }
}

TEST(RandomInstanceTest, EntriesInRange) {
  const auto lp = std::get<LpSpec>(random_instance(Family::kLp, 5, 4, 3));
  EXPECT_LE(lp.c.cwiseAbs().maxCoeff(), 5.0);
  EXPECT_LE(lp.A.cwiseAbs().maxCoeff(), 5.0);
  EXPECT_LE(lp.lower.cwiseAbs().maxCoeff(), 5.0);
  EXPECT_LE(lp.upper.cwiseAbs().maxCoeff(), 5.0);
}

TEST(RandomInstanceTest, SmallestSizes) {
  for (const Family family : {Family::kLp, Family::kQp}) {
    const ProblemSpec spec = random_instance(family, 1, 1, 5);
    const BuiltProgram built = build(spec);
    EXPECT_EQ(built.program.dimension(), 1);
    EXPECT_EQ(built.program.num_constraints(), 1);
  }
}

TEST(SplitMix64Test, KnownSequence) {
  // Reference values of the published generator for seed 1234567.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(ObjectiveLowerBoundTest, ExactOnBoxForLp) {
  // min c^T x over [0,10]^4 with c <= 0 is 10 * sum(c).
  EXPECT_DOUBLE_EQ(objective_lower_bound(paper_lp_instance()), -100.0);
  EXPECT_DOUBLE_EQ(objective_lower_bound(paper_qp_instance()), -50.0);
}

TEST(DefaultInitialPointTest, CornerConvention) {
  EXPECT_EQ(default_initial_point(paper_lp_instance()), Vector::Constant(4, 10.0));
  EXPECT_EQ(default_initial_point(paper_qp_instance()), Vector::Zero(2));
}

}  // namespace
}  // namespace queuegrad
