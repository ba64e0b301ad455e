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

// Weighted point sets, distance oracles and the cost / ball / projection
// primitives shared by every solver in the library.

#ifndef DYNKMED_METRIC_HPP_
#define DYNKMED_METRIC_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynkmed/types.hpp"

namespace dynkmed {

// Read-only distance oracle. Implementations must be symmetric with a zero
// diagonal; MetricSpace additionally guarantees 1 <= d <= delta off-diagonal.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual double Distance(PointId p, PointId q) const = 0;
  virtual bool Contains(PointId p) const = 0;
  // Every id the oracle can answer for, ascending.
  virtual std::vector<PointId> GroundIds() const = 0;
};

// The ground space X: either an explicit validated distance matrix or
// coordinates under a p-norm. Coordinate spaces grow as points are added.
class MetricSpace final : public DistanceOracle {
 public:
  enum class Backing { kMatrix, kCoordinates };

  // Validates symmetry, zero diagonal, 1 <= d <= delta and the triangle
  // inequality on every triple. A delta <= 0 means "the maximum entry".
  static MetricSpace FromMatrix(std::vector<std::vector<double>> rows, double delta = 0.0);

  // Empty coordinate space of the given dimension; norm_p >= 1 or infinity.
  static MetricSpace FromCoordinates(std::size_t dim, double norm_p, double delta);

  // Adds a coordinate point. Re-adding an id with identical coordinates is a
  // no-op; different coordinates or a location that duplicates another id
  // (distance 0) is rejected.
  void AddPoint(PointId id, std::span<const double> coords);

  // Multiplies all coordinates by `factor` (used to enforce min distance 1).
  void Rescale(double factor);

  double Distance(PointId p, PointId q) const override;
  bool Contains(PointId p) const override;
  std::vector<PointId> GroundIds() const override;

  Backing backing() const { return backing_; }
  double delta() const { return delta_; }
  std::size_t dimension() const { return dim_; }
  double norm_p() const { return norm_p_; }
  std::size_t size() const { return count_; }
  std::span<const double> Coordinates(PointId id) const;

 private:
  MetricSpace() = default;
  void CheckId(PointId p) const;

  Backing backing_ = Backing::kMatrix;
  double delta_ = 1.0;
  std::size_t dim_ = 0;
  double norm_p_ = 2.0;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;           // matrix row length
  std::vector<double> matrix_;       // row-major, stride_ x stride_
  std::vector<double> coords_;       // id-major, dim_ per slot
  std::vector<char> present_;        // coordinate slots in use
  std::map<std::vector<double>, PointId> locations_;
};

// Matrix file: first token n, then n rows of n reals.
MetricSpace LoadMatrixFile(const std::string& path, double delta = 0.0);

// Instance file, one line per point: "id w x1 ... xd". Returns the space and
// the weighted input set. The space is rescaled so that the minimum distance
// over sampled pairs is at least 1.
class PointSet;
std::pair<MetricSpace, PointSet> LoadCoordinateFile(const std::string& path, double norm_p,
                                                    double delta);

// The current input P: ids with strictly positive weights, kept sorted by id.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<WeightedPoint> points);

  // Fails with kDuplicateId if present, kInvalidArgument if weight <= 0.
  void Insert(PointId id, double weight);
  // Fails with kUnknownId if absent.
  void Erase(PointId id);

  bool Contains(PointId id) const;
  std::optional<double> WeightOf(PointId id) const;

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double TotalWeight() const;
  double MaxWeight() const;

  std::span<const WeightedPoint> points() const { return points_; }
  std::vector<PointId> Ids() const;
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<WeightedPoint> points_;
};

// Points of `a` absent from `b` or present with a different weight.
PointSet Difference(const PointSet& a, const PointSet& b);
// Ids in the symmetric difference, counting weight changes.
std::vector<PointId> SymmetricDifferenceIds(const PointSet& a, const PointSet& b);

// Sorted, duplicate-free copy.
CenterSet Normalize(std::vector<PointId> ids);
bool ContainsId(const CenterSet& sorted, PointId id);

double Distance(const DistanceOracle& space, PointId p, PointId q);

// d(p, centers); +inf for an empty set.
double DistanceToSet(const DistanceOracle& space, PointId p, std::span<const PointId> centers);

// sum w(p) d(p, centers). Empty points give 0; empty centers with a
// nonempty input is an error.
double Cost(const DistanceOracle& space, std::span<const PointId> centers, const PointSet& points);

// Cost over total weight; zero total weight is an error.
double AvCost(const DistanceOracle& space, std::span<const PointId> centers, const PointSet& subset);

// Members of `points` within `radius` (inclusive) of `center`.
PointSet Ball(const DistanceOracle& space, const PointSet& points, PointId center, double radius);

struct NearestResult {
  PointId id;
  double distance;
};

// argmin over targets, ties to the smallest id. Empty targets is an error.
NearestResult Nearest(const DistanceOracle& space, PointId p, std::span<const PointId> targets);

// Lazily built columns d(c, p_i) over a fixed point list, one per center c
// that is asked for. Local search reuses a small candidate set many times,
// so each column is computed once.
class DistanceColumns {
 public:
  DistanceColumns(const DistanceOracle& space, std::span<const WeightedPoint> points);

  // Stable until the object is destroyed.
  const double* Column(PointId c);

 private:
  const DistanceOracle& space_;
  std::vector<PointId> ids_;
  std::unordered_map<std::uint32_t, std::vector<double>> columns_;
};

// Brute-force triangle-inequality check over every triple of `ids`.
bool SatisfiesTriangleInequality(const DistanceOracle& space, std::span<const PointId> ids,
                                 double rel_tol = 1e-9);

}  // namespace dynkmed

#endif  // DYNKMED_METRIC_HPP_
