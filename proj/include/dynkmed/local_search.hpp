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

// Randomized local search that shrinks a center set by s centers through
// insert-then-best-delete swaps.

#ifndef DYNKMED_LOCAL_SEARCH_HPP_
#define DYNKMED_LOCAL_SEARCH_HPP_

#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynkmed/metric.hpp"
#include "dynkmed/random.hpp"
#include "dynkmed/static_solvers.hpp"

namespace dynkmed {

// Nearest and second-nearest center of every input point under a mutable
// center set. Centers occupy stable slots so per-point references survive
// removals.
class AssignmentState {
 public:
  // `columns`, when given, must be built over `points` in the same order and
  // outlive the state; it lets several searches share distance columns.
  AssignmentState(const DistanceOracle& space, const PointSet& points,
                  std::span<const PointId> centers, DistanceColumns* columns = nullptr);

  // Fails with kDuplicateId if v is already a center.
  void AddCenter(PointId v);
  // Fails with kUnknownId if z is not a center. Removing the center added by
  // the previous call rolls that call back instead of rescanning.
  void RemoveCenter(PointId z);

  CenterSet Centers() const;
  std::size_t num_centers() const { return num_centers_; }
  std::size_t num_points() const { return points_.size(); }
  double total_cost() const { return total_cost_; }

  // Cost increase from deleting each center: sum over its cluster of
  // w(p) (d2(p) - d1(p)). Indexed like Centers().
  std::vector<double> RemovalLoss() const;

  double RecomputeCost() const;

  // The center with the smallest removal loss, ties to the smallest id, and
  // that loss. Requires at least one center.
  std::pair<PointId, double> CheapestRemoval() const;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Saved {
    std::size_t i, first, second;
    double d1, d2;
  };
  void Rescan(std::size_t i);
  // Recomputes clusters, bounds, losses and the total from first_/d1_/d2_.
  void Rebuild();
  void Attach(std::size_t i, std::size_t slot);
  void Detach(std::size_t i);
  // Row of center-to-center distances for `c`, indexed by local center
  // index; entries are filled on demand.
  std::size_t LocalIndex(PointId c);
  double CenterDistance(std::size_t a, std::size_t b);

  const DistanceOracle& space_;
  std::vector<WeightedPoint> points_;
  std::unique_ptr<DistanceColumns> own_columns_;
  DistanceColumns* columns_;
  std::vector<PointId> slots_;  // kNoPoint marks a free slot
  std::vector<const double*> slot_columns_;
  std::vector<std::size_t> slot_local_;
  std::unordered_map<std::uint32_t, std::size_t> local_;
  std::vector<PointId> local_ids_;
  std::vector<std::vector<double>> center_dist_;  // NaN until computed
  std::size_t num_centers_ = 0;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> second_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  // Per slot: member points, an upper bound on d1 + d2 over them (a new
  // center farther than that from the slot cannot affect any member), and
  // the removal loss, sum of w (d2 - d1).
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::size_t> pos_;  // index of each point in its member list
  std::vector<double> bound_;
  std::vector<double> loss_;
  double total_cost_ = 0.0;

  // Undo log of the last AddCenter.
  PointId last_added_ = kNoPoint;
  std::size_t last_slot_ = kNone;
  bool last_appended_ = false;
  bool last_rebuilt_ = false;
  double last_total_ = 0.0;
  std::vector<double> last_loss_;
  std::vector<double> last_bound_;
  std::vector<Saved> journal_;
};

struct Deletion {
  PointId center;
  double resulting_cost;
};

// The center whose removal yields the cheapest solution, ties to the smallest
// id. Requires at least two centers when the input is nonempty.
Deletion BestDeletion(const AssignmentState& state);

// Returns U* subset of U with |U*| = |U| - s. Starts from U minus its s
// smallest ids and runs ls_iteration_multiplier * s * ceil(log2(n + 2))
// sample-insert / best-delete swaps. In kExact mode returns the best
// (|U| - s)-subset of U when the enumeration budget allows.
CenterSet RandLocalSearch(const DistanceOracle& space, const PointSet& points,
                          std::span<const PointId> U, std::size_t s, const SolverConfig& cfg,
                          Rng& rng, DistanceColumns* columns = nullptr);

}  // namespace dynkmed

#endif  // DYNKMED_LOCAL_SEARCH_HPP_
