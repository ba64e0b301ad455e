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

#ifndef DYNKMED_NEAREST_INDEX_HPP_
#define DYNKMED_NEAREST_INDEX_HPP_

#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynkmed/metric.hpp"

namespace dynkmed {

// For every tracked point (input points and centers) an ordered set of the
// current centers keyed by (distance, id). A center that leaves the input
// keeps its tree until it stops being a center.
class NearestCenterIndex {
 public:
  explicit NearestCenterIndex(const DistanceOracle& space) : space_(space) {}

  void Rebuild(const PointSet& points, std::span<const PointId> centers);

  // Fails with kInvalidArgument when `added` holds a current center,
  // `removed` holds a non-center, or the two overlap.
  void ApplyCenterDiff(std::span<const PointId> added, std::span<const PointId> removed);

  // Starts tracking an input point. Fails with kDuplicateId if it is
  // already an input point.
  void AddPoint(PointId p);
  // Stops tracking an input point; its tree survives while it is a center.
  void RemovePoint(PointId p);

  // Nearest current center of a tracked point, ties to the smallest id.
  NearestResult Nearest(PointId p) const;

  bool Tracks(PointId p) const { return entries_.count(Raw(p)) != 0; }
  std::size_t tracked() const { return entries_.size(); }
  const CenterSet& centers() const { return centers_; }
  // Ordered (distance, center) pairs of p's tree.
  std::vector<std::pair<double, PointId>> Tree(PointId p) const;

 private:
  struct Entry {
    std::set<std::pair<double, PointId>> tree;
    bool in_points = false;
    bool is_center = false;
  };
  Entry MakeEntry(PointId p) const;

  const DistanceOracle& space_;
  CenterSet centers_;
  std::unordered_map<std::uint32_t, Entry> entries_;
};

}  // namespace dynkmed

#endif  // DYNKMED_NEAREST_INDEX_HPP_
