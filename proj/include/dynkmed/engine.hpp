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

// The dynamic k-median engine. Updates are grouped into epochs of l+1
// updates: the epoch opens by shrinking the solution by l centers, handles
// updates lazily, and closes by developing, pruning and robustifying a fresh
// solution from the epoch's start and end snapshots.

#ifndef DYNKMED_ENGINE_HPP_
#define DYNKMED_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dynkmed/develop_centers.hpp"
#include "dynkmed/metric.hpp"
#include "dynkmed/nearest_index.hpp"
#include "dynkmed/random.hpp"
#include "dynkmed/robustify.hpp"
#include "dynkmed/static_solvers.hpp"

namespace dynkmed {

struct EngineConfig {
  std::size_t k = 1;
  double delta = 1.0;
  double gamma = 4000.0;
  // Epoch length divisor: l = floor(l' / big_c).
  double big_c = 1.0;
  // RemoveCenters stops at the first r whose shrunken solution costs more
  // than removal_threshold * cost(U_init).
  double removal_threshold = 1.0;
  double stability_eta = 1.0;
  // DevelopCenters adds ceil(develop_slack_multiplier * (l + 1)) centers.
  double develop_slack_multiplier = 1.0;
  bool practical_mode = false;
  std::uint64_t seed = 1;
  SolverConfig solver;
  DevelopConfig develop;

  // gamma = 4000, C = 12 * 3e5 * gamma * beta^2, threshold = 14 * 400 gamma
  // beta, eta = 400 gamma beta, slack = 8C + 2, with beta = solver.beta_target.
  static EngineConfig Paper(std::size_t k, double delta, double beta = 5.0);
  // gamma = 4, C = 12, threshold = 14, slack = 10, eta = 1.
  static EngineConfig Practical(std::size_t k, double delta);

  // Switches every subroutine to its exact counterpart.
  EngineConfig& UseExactSubroutines(std::uint64_t budget = kDefaultEnumerationBudget);

  void Validate() const;
};

struct UpdateEvent {
  enum class Op { kInsert, kDelete };
  Op op = Op::kInsert;
  PointId id = kNoPoint;
  double weight = 1.0;
};

struct RecourseReport {
  CenterSet added;
  CenterSet removed;
  std::int64_t makerobust_calls = 0;
  RobustifyStats robustify;
  bool epoch_boundary = false;
  // Centers of U_init contaminated by this update.
  int contaminated = 0;
  // |W (+) U_init| at a close-out, -1 otherwise.
  std::int64_t epoch_diff = -1;
};

struct EngineMetrics {
  std::int64_t updates = 0;
  std::int64_t epochs = 0;  // epochs opened
  std::int64_t bootstrap_entries = 0;
  std::int64_t total_added = 0;
  std::int64_t total_removed = 0;
  RobustifyStats robustify;
  int max_contaminated = 0;
  std::int64_t max_epoch_diff = 0;
  // Close-outs where |W (+) U_init| exceeded (2 slack + 2)(l + 1).
  std::int64_t epoch_diff_violations = 0;
  std::int64_t star_forced = 0;
  std::int64_t star_weight_capped = 0;
  std::size_t ell = 0;
  bool bootstrap = true;
};

class Engine {
 public:
  // `space` must outlive the engine and contain every id that is inserted.
  Engine(const DistanceOracle& space, const EngineConfig& cfg);

  // Fails with kDuplicateId (insert of a present id), kUnknownId (delete of
  // an absent id, or insert of an id unknown to the space) or
  // kInvalidArgument (weight <= 0). A failed update leaves the engine as it
  // was.
  RecourseReport ApplyUpdate(const UpdateEvent& ev);

  // The maintained improper solution, at most k centers.
  CenterSet CurrentSolution() const;
  // Every center moved to its nearest input point; requires a nonempty input.
  CenterSet ProjectToProper() const;
  double CurrentCost() const;

  const PointSet& points() const { return points_; }
  const EngineConfig& config() const { return cfg_; }
  const EngineMetrics& metrics() const { return metrics_; }
  bool in_bootstrap() const { return bootstrap_; }
  // U_init of the current epoch (the robust solution at its start).
  const RobustSolution& epoch_initial() const { return u_init_; }
  const PointSet& epoch_points() const { return p0_; }
  std::size_t ell() const { return ell_; }
  std::size_t updates_in_epoch() const { return seen_; }
  // cost(U^(0), P^(0)) of the current epoch.
  double epoch_start_cost() const { return epoch_start_cost_; }
  std::int64_t epoch_id() const { return metrics_.epochs; }
  const NearestCenterIndex& index() const { return index_; }

  struct Removal {
    CenterSet centers;  // U^(0)
    std::size_t ell = 0;
    std::size_t r_break = 0;
  };
  // RemoveCenters on the current U_init and P^(0). Exposed for tests.
  Removal RemoveCenters();

 private:
  void OpenEpoch();
  void CloseEpoch(RecourseReport& report);
  void EnterBootstrap();
  void SetSolution(CenterSet next);

  const DistanceOracle& space_;
  EngineConfig cfg_;
  Rng ls_rng_;
  Rng one_median_rng_;
  Rng static_rng_;
  Rng develop_rng_;

  PointSet points_;
  bool bootstrap_ = true;
  CenterSet solution_;

  PointSet p0_;
  RobustSolution u_init_;
  std::size_t ell_ = 0;
  std::size_t seen_ = 0;
  double epoch_start_cost_ = 0.0;

  NearestCenterIndex index_;
  EngineMetrics metrics_;
};

// The largest per-update contamination the analysis allows:
// ceil(log10 delta) + 2.
int ContaminationBound(double delta);

}  // namespace dynkmed

#endif  // DYNKMED_ENGINE_HPP_
