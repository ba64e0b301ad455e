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

#include <cmath>
#include <fstream>
#include <random>

#include "dynkmed/metric.hpp"
#include "support/oracle.hpp"

namespace dynkmed {
namespace {

using testing::DirectCost;
using testing::Id;
using testing::Ids;

MetricSpace LineSpace(std::vector<double> xs, double delta = 100.0) {
  MetricSpace space = MetricSpace::FromCoordinates(1, 2.0, delta);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    space.AddPoint(MakeId(static_cast<std::uint32_t>(i)), std::vector<double>{xs[i]});
  }
  return space;
}

TEST(MetricSpaceTest, DistanceToSelfIsZero) {
  auto space = MetricSpace::FromMatrix({{0, 3}, {3, 0}});
  EXPECT_EQ(space.Distance(Id(0), Id(0)), 0.0);
}

TEST(MetricSpaceTest, MatrixReadBack) {
  auto space = MetricSpace::FromMatrix({{0, 3}, {3, 0}});
  EXPECT_EQ(space.Distance(Id(0), Id(1)), 3.0);
  EXPECT_EQ(space.delta(), 3.0);
}

TEST(MetricSpaceTest, EuclideanPythagorean) {
  auto space = MetricSpace::FromCoordinates(2, 2.0, 10.0);
  space.AddPoint(Id(0), std::vector<double>{0, 0});
  space.AddPoint(Id(1), std::vector<double>{3, 4});
  EXPECT_DOUBLE_EQ(space.Distance(Id(0), Id(1)), 5.0);
}

TEST(MetricSpaceTest, OtherNorms) {
  auto l1 = MetricSpace::FromCoordinates(2, 1.0, 10.0);
  l1.AddPoint(Id(0), std::vector<double>{0, 0});
  l1.AddPoint(Id(1), std::vector<double>{3, 4});
  EXPECT_DOUBLE_EQ(l1.Distance(Id(0), Id(1)), 7.0);
  auto linf = MetricSpace::FromCoordinates(2, INFINITY, 10.0);
  linf.AddPoint(Id(0), std::vector<double>{0, 0});
  linf.AddPoint(Id(1), std::vector<double>{3, 4});
  EXPECT_DOUBLE_EQ(linf.Distance(Id(0), Id(1)), 4.0);
}

TEST(MetricSpaceTest, RejectsBadMatrices) {
  auto code = [](std::vector<std::vector<double>> rows) {
    try {
      MetricSpace::FromMatrix(std::move(rows));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code({{0, 2}, {3, 0}}), ErrorCode::kMetricViolation);               // asymmetric
  EXPECT_EQ(code({{1, 2}, {2, 0}}), ErrorCode::kMetricViolation);               // diagonal
  EXPECT_EQ(code({{0, 0.5}, {0.5, 0}}), ErrorCode::kMetricViolation);           // below 1
  EXPECT_EQ(code({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), ErrorCode::kMetricViolation);  // triangle
  EXPECT_THROW(MetricSpace::FromMatrix({{0, 50}, {50, 0}}, 10.0), Error);       // above delta
}

TEST(MetricSpaceTest, CoordinateValidation) {
  auto space = MetricSpace::FromCoordinates(2, 2.0, 10.0);
  space.AddPoint(Id(0), std::vector<double>{0, 0});
  space.AddPoint(Id(0), std::vector<double>{0, 0});  // identical re-add is a no-op
  EXPECT_EQ(space.size(), 1u);
  EXPECT_THROW(space.AddPoint(Id(0), std::vector<double>{1, 0}), Error);
  EXPECT_THROW(space.AddPoint(Id(1), std::vector<double>{0, 0}), Error);
  EXPECT_THROW(space.AddPoint(Id(2), std::vector<double>{0}), Error);
  EXPECT_THROW(space.Distance(Id(0), Id(7)), Error);
  EXPECT_THROW(MetricSpace::FromCoordinates(2, 0.5, 10.0), Error);
}

TEST(MetricSpaceTest, LoadMatrixFile) {
  const std::string path = ::testing::TempDir() + "/metric_test_matrix.txt";
  {
    std::ofstream out(path);
    out << "3\n0 1 2\n1 0 1\n2 1 0\n";
  }
  auto space = LoadMatrixFile(path);
  EXPECT_EQ(space.size(), 3u);
  EXPECT_EQ(space.Distance(Id(0), Id(2)), 2.0);
  EXPECT_THROW(LoadMatrixFile(path + ".missing"), Error);
}

TEST(PointSetTest, InsertEraseAndValidation) {
  PointSet ps;
  ps.Insert(Id(3), 2.0);
  ps.Insert(Id(1), 1.0);
  EXPECT_EQ(ps.Ids(), Ids({1, 3}));
  EXPECT_DOUBLE_EQ(ps.TotalWeight(), 3.0);
  EXPECT_THROW(ps.Insert(Id(1), 1.0), Error);
  EXPECT_THROW(ps.Insert(Id(2), 0.0), Error);
  EXPECT_THROW(ps.Erase(Id(9)), Error);
  ps.Erase(Id(3));
  EXPECT_FALSE(ps.Contains(Id(3)));
}

TEST(CostTest, SingleAssignment) {
  auto space = MetricSpace::FromMatrix({{0, 2}, {2, 0}});
  PointSet ps({{Id(0), 1.0}, {Id(1), 1.0}});
  EXPECT_EQ(Cost(space, Ids({0}), ps), 2.0);
}

TEST(CostTest, EmptySum) {
  auto space = MetricSpace::FromMatrix({{0, 2}, {2, 0}});
  EXPECT_EQ(Cost(space, Ids({0}), PointSet()), 0.0);
}

TEST(CostTest, MatchesDirectSummation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = testing::GridSpace(6, 20, 100 + trial);
    auto ps = testing::RandomPoints(6, 5, 200 + trial);
    std::vector<PointId> centers = {Id(rng() % 6), Id(rng() % 6)};
    EXPECT_NEAR(Cost(space, centers, ps), DirectCost(space, centers, ps), 1e-9);
  }
}

TEST(AvCostTest, CoLocatedIsZero) {
  auto space = LineSpace({0, 5});
  PointSet ps({{Id(0), 4.0}});
  EXPECT_EQ(AvCost(space, Ids({0}), ps), 0.0);
}

TEST(AvCostTest, ArithmeticMean) {
  auto space = LineSpace({0, 1, 3});
  PointSet ps({{Id(1), 1.0}, {Id(2), 1.0}});
  EXPECT_DOUBLE_EQ(AvCost(space, Ids({0}), ps), 2.0);
}

TEST(AvCostTest, WeightedMatchesOracle) {
  auto space = testing::GridSpace(5, 15, 3);
  auto ps = testing::RandomPoints(5, 9, 4);
  const auto centers = Ids({2});
  EXPECT_NEAR(AvCost(space, centers, ps), DirectCost(space, centers, ps) / ps.TotalWeight(),
              1e-12);
}

TEST(BallTest, ZeroRadiusCenterOutsidePoints) {
  auto space = LineSpace({0, 1, 2});
  PointSet ps({{Id(0), 1.0}, {Id(2), 1.0}});
  EXPECT_TRUE(Ball(space, ps, Id(1), 0.0).empty());
}

TEST(BallTest, RadiusDeltaTakesEverything) {
  auto space = LineSpace({0, 1, 2, 5}, 5.0);
  auto ps = testing::RandomPoints(4, 1, 1);
  EXPECT_EQ(Ball(space, ps, Id(1), space.delta()), ps);
}

TEST(BallTest, LineInstanceMatchesScan) {
  auto space = LineSpace({0, 1, 2, 5});
  auto ps = testing::RandomPoints(4, 1, 1);
  const PointSet ball = Ball(space, ps, Id(1), 1.5);
  std::vector<PointId> expect;
  for (const auto& p : ps) {
    if (space.Distance(p.id, Id(1)) <= 1.5) expect.push_back(p.id);
  }
  EXPECT_EQ(ball.Ids(), expect);
  EXPECT_EQ(ball.Ids(), Ids({0, 1, 2}));
}

TEST(NearestTest, SelfInTargets) {
  auto space = LineSpace({0, 1, 2});
  const auto r = Nearest(space, Id(1), Ids({0, 1, 2}));
  EXPECT_EQ(r.id, Id(1));
  EXPECT_EQ(r.distance, 0.0);
}

TEST(NearestTest, TieGoesToSmallerId) {
  auto space = LineSpace({0, 1, 2});
  EXPECT_EQ(Nearest(space, Id(1), Ids({2, 0})).id, Id(0));
}

TEST(NearestTest, RandomMatchesLinearScan) {
  auto space = testing::GridSpace(30, 40, 11);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PointId> targets;
    for (int j = 0; j < 5; ++j) targets.push_back(Id(rng() % 30));
    const PointId p = Id(rng() % 30);
    PointId best = kNoPoint;
    double bd = INFINITY;
    for (PointId t : targets) {
      const double d = space.Distance(p, t);
      if (d < bd || (d == bd && t < best)) {
        bd = d;
        best = t;
      }
    }
    const auto r = Nearest(space, p, targets);
    EXPECT_EQ(r.id, best);
    EXPECT_EQ(r.distance, bd);
  }
  EXPECT_THROW(Nearest(space, Id(0), std::vector<PointId>{}), Error);
}

TEST(DistanceColumnsTest, ColumnsMatchDistances) {
  auto space = testing::GridSpace(10, 20, 2);
  auto ps = testing::RandomPoints(10, 1, 1);
  DistanceColumns cols(space, ps.points());
  const double* c3 = cols.Column(Id(3));
  cols.Column(Id(4));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_EQ(c3[i], space.Distance(ps.points()[i].id, Id(3)));
  }
}

TEST(TriangleTest, GridSatisfiesTriangleInequality) {
  auto space = testing::GridSpace(12, 20, 9);
  EXPECT_TRUE(SatisfiesTriangleInequality(space, space.GroundIds()));
}

}  // namespace
}  // namespace dynkmed
