// Copyright 2026 The dynkmed Authors
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

#include <random>

#include "dynkmed/oracles.hpp"
#include "support/oracle.hpp"

namespace dynkmed {
namespace {

using testing::AllIds;
using testing::BruteOpt;
using testing::DirectCost;
using testing::Id;
using testing::Ids;

TEST(BinomialTest, SmallValuesAndSaturation) {
  EXPECT_EQ(Binomial(5, 2), 10u);
  EXPECT_EQ(Binomial(40, 13), 12033222880u);
  EXPECT_EQ(Binomial(3, 5), 0u);
  EXPECT_EQ(Binomial(1000, 500), UINT64_MAX);
}

TEST(OptExactTest, EveryPointACenter) {
  auto space = testing::GridSpace(5, 10, 1);
  auto ps = testing::RandomPoints(5, 3, 2);
  EXPECT_EQ(OptExact(space, ps, 5, AllIds(ps)).cost, 0.0);
  EXPECT_EQ(OptExact(space, ps, 9, AllIds(ps)).cost, 0.0);
}

TEST(OptExactTest, TwoPointsTieToSmallerId) {
  auto space = MetricSpace::FromMatrix({{0, 2}, {2, 0}});
  PointSet ps({{Id(0), 1.0}, {Id(1), 1.0}});
  const auto r = OptExact(space, ps, 1, Ids({0, 1}));
  EXPECT_EQ(r.cost, 2.0);
  EXPECT_EQ(r.centers, Ids({0}));
}

TEST(OptExactTest, MatchesIndependentEnumeration) {
  for (int trial = 0; trial < 15; ++trial) {
    auto space = testing::GridSpace(8, 30, 10 + trial);
    auto ps = testing::RandomPoints(8, 4, 20 + trial);
    const auto r = OptExact(space, ps, 3, AllIds(ps));
    EXPECT_NEAR(r.cost, BruteOpt(space, ps, 3, AllIds(ps)), 1e-9);
    EXPECT_NEAR(DirectCost(space, r.centers, ps), r.cost, 1e-9);
    EXPECT_LE(r.centers.size(), 3u);
  }
}

TEST(OptExactTest, BudgetIsEnforced) {
  auto space = testing::GridSpace(20, 30, 1);
  auto ps = testing::RandomPoints(20, 1, 1);
  try {
    OptExact(space, ps, 10, AllIds(ps), 1000);
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

TEST(OptExactTest, ImproperUsesWholeGround) {
  auto space = testing::GridSpace(8, 30, 4);
  PointSet ps({{Id(0), 1.0}, {Id(1), 1.0}, {Id(2), 1.0}});
  EXPECT_NEAR(OptExactImproper(space, ps, 1).cost, BruteOpt(space, ps, 1, space.GroundIds()),
              1e-9);
}

TEST(OptCurveTest, CoLocatedSingleLocationIsZero) {
  auto space = testing::GridSpace(3, 10, 1);
  PointSet ps({{Id(1), 5.0}});
  const auto curve = OptCurveExact(space, ps, 1, 3, AllIds(ps));
  for (const auto& [k, v] : curve.values) EXPECT_EQ(v, 0.0) << k;
}

TEST(OptCurveTest, AllDistinctPointsAsCenters) {
  auto space = testing::GridSpace(5, 10, 2);
  auto ps = testing::RandomPoints(5, 1, 1);
  EXPECT_EQ(OptCurveExact(space, ps, 1, 5, AllIds(ps)).values.at(5), 0.0);
}

TEST(OptCurveTest, NonincreasingAndMatchesOracle) {
  auto space = testing::GridSpace(10, 30, 3);
  auto ps = testing::RandomPoints(10, 3, 3);
  const auto curve = OptCurveExact(space, ps, 1, 4, AllIds(ps));
  double prev = INFINITY;
  for (std::size_t k = 1; k <= 4; ++k) {
    const double v = curve.values.at(k);
    EXPECT_LE(v, prev);
    EXPECT_NEAR(v, BruteOpt(space, ps, k, AllIds(ps)), 1e-9);
    prev = v;
  }
}

TEST(WellSeparatedTest, CoLocatedPair) {
  auto space = testing::GridSpace(4, 10, 1);
  EXPECT_TRUE(IsWellSeparated(space, Id(0), Ids({0, 1}), Id(0), Ids({0, 2}), 1e6));
}

TEST(WellSeparatedTest, CloseNeighborFails) {
  auto space = MetricSpace::FromCoordinates(1, 2.0, 100.0);
  space.AddPoint(Id(0), std::vector<double>{0});
  space.AddPoint(Id(1), std::vector<double>{2});   // u' near u
  space.AddPoint(Id(2), std::vector<double>{10});  // v
  EXPECT_FALSE(IsWellSeparated(space, Id(0), Ids({0, 1}), Id(2), Ids({2}), 4.0));
}

TEST(WellSeparatedTest, RandomMatchesDefinition) {
  auto space = testing::GridSpace(12, 50, 8);
  std::mt19937_64 rng(3);
  auto sep = [&](PointId x, const std::vector<PointId>& S) {
    double best = INFINITY;
    for (PointId y : S) {
      if (y != x) best = std::min(best, space.Distance(x, y));
    }
    return best;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PointId> U = {Id(rng() % 6), Id(rng() % 6)};
    std::vector<PointId> V = {Id(6 + rng() % 6), Id(6 + rng() % 6)};
    const PointId u = U[0], v = V[0];
    const double gamma = 0.5 + (rng() % 8) * 0.5;
    const double duv = space.Distance(u, v);
    const bool expect = sep(u, U) >= gamma * duv && sep(v, V) >= gamma * duv;
    EXPECT_EQ(IsWellSeparated(space, u, U, v, V, gamma), expect) << trial;
  }
}

TEST(LazyLemmaTest, IdenticalSets) {
  auto space = testing::GridSpace(8, 20, 1);
  auto ps = testing::RandomPoints(8, 2, 1);
  EXPECT_TRUE(CheckLazyUpdatesLemma(space, ps, ps, 3));
}

TEST(LazyLemmaTest, OneInsertionAndRandomPairs) {
  for (int trial = 0; trial < 10; ++trial) {
    auto space = testing::GridSpace(12, 30, 40 + trial);
    PointSet before = testing::RandomPoints(9, 3, trial);
    PointSet after = before;
    after.Insert(Id(9), 1.0);
    EXPECT_TRUE(CheckLazyUpdatesLemma(space, before, after, 2));
    // s = 3: one deletion, two insertions. Verify the oracle agrees as well.
    PointSet after3 = before;
    after3.Erase(Id(0));
    after3.Insert(Id(10), 2.0);
    after3.Insert(Id(11), 1.0);
    const auto ground = space.GroundIds();
    EXPECT_LE(BruteOpt(space, after3, 5, ground), BruteOpt(space, before, 2, ground) + 1e-9);
    EXPECT_TRUE(CheckLazyUpdatesLemma(space, before, after3, 2));
  }
}

TEST(StabilityTest, ZeroRemovalsTrivial) {
  auto space = testing::GridSpace(8, 20, 2);
  auto ps = testing::RandomPoints(8, 1, 1);
  EXPECT_TRUE(CheckDoubleSidedStability(space, ps, 3, 0, 1.0).ok());
}

TEST(StabilityTest, IdenticalPointsAllZero) {
  auto space = testing::GridSpace(4, 20, 2);
  PointSet ps({{Id(2), 7.0}});
  EXPECT_TRUE(CheckDoubleSidedStability(space, ps, 3, 2, 1.0).ok());
}

TEST(StabilityTest, RandomTwelvePoints) {
  for (int trial = 0; trial < 5; ++trial) {
    auto space = testing::GridSpace(12, 40, 70 + trial);
    auto ps = testing::RandomPoints(12, 2, trial);
    const auto ground = space.GroundIds();
    // r = 2, eta = 2: floor(2 / 24) = 0, so the conclusion is OPT_4 <= 4 OPT_4
    // whenever the hypothesis OPT_2 <= 2 OPT_4 holds.
    const double opt2 = BruteOpt(space, ps, 2, ground);
    const double opt4 = BruteOpt(space, ps, 4, ground);
    const auto check = CheckDoubleSidedStability(space, ps, 4, 2, 2.0);
    EXPECT_TRUE(check.ok());
    EXPECT_EQ(check.verdict == StabilityVerdict::kHypothesisUnmet, opt2 > 2.0 * opt4 * (1 + 1e-9));
  }
}

TEST(ProjectionLemmaTest, OptimalSetAndFullSet) {
  auto space = testing::GridSpace(9, 30, 5);
  auto ps = testing::RandomPoints(9, 3, 6);
  std::vector<PointId> best;
  BruteOpt(space, ps, 2, space.GroundIds(), &best);
  EXPECT_TRUE(CheckProjectionLemma(space, ps, best, 2));
  EXPECT_TRUE(CheckProjectionLemma(space, ps, AllIds(ps), 1));
}

TEST(ProjectionLemmaTest, RandomSupersets) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto space = testing::GridSpace(14, 40, 90 + trial);
    PointSet ps;
    for (std::uint32_t i = 0; i < 9; ++i) ps.Insert(Id(i), 1.0 + rng() % 3);
    std::vector<PointId> U;
    while (U.size() < 5) {
      const PointId c = Id(rng() % 14);
      if (std::find(U.begin(), U.end(), c) == U.end()) U.push_back(c);
    }
    std::sort(U.begin(), U.end());
    const double lhs = BruteOpt(space, ps, 2, U);
    const double rhs = DirectCost(space, U, ps) + 2 * BruteOpt(space, ps, 2, space.GroundIds());
    EXPECT_LE(lhs, rhs * (1 + 1e-9));
    EXPECT_TRUE(CheckProjectionLemma(space, ps, U, 2));
  }
}

}  // namespace
}  // namespace dynkmed
