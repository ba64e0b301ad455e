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

// Robust centers. A center is t-robust when it is the tail of a chain
// p_t, ..., p_0 in which every p_{i-1} is either p_i or a good 1-median of
// the radius-10^i ball around p_i. A solution is robust when every center is
// robust at the scale of its distance to the other centers.

#ifndef DYNKMED_ROBUSTIFY_HPP_
#define DYNKMED_ROBUSTIFY_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dynkmed/metric.hpp"
#include "dynkmed/random.hpp"
#include "dynkmed/static_solvers.hpp"

namespace dynkmed {

// Smallest integer t with 10^t >= x, for x > 0. Exact at powers of ten.
int CeilLog10(double x);

struct CenterRecord {
  PointId center = kNoPoint;
  int t_level = 0;
  // p_{t}: the point the chain was started from.
  PointId anchor = kNoPoint;
  // p_t, ..., p_0 (front is the anchor, back is the center).
  std::vector<PointId> chain;

  static CenterRecord Plain(PointId c) { return {c, 0, c, {c}}; }
};

class RobustSolution {
 public:
  RobustSolution() = default;
  // Every center gets t = 0 and anchor = itself.
  static RobustSolution FromCenters(std::span<const PointId> centers);

  bool Contains(PointId c) const { return records_.count(c) != 0; }
  const CenterRecord& At(PointId c) const;
  // Replaces any record with the same center.
  void Put(CenterRecord rec);
  void Erase(PointId c);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  CenterSet Centers() const;
  const std::map<PointId, CenterRecord>& records() const { return records_; }

 private:
  std::map<PointId, CenterRecord> records_;
};

struct MakeRobustResult {
  PointId center = kNoPoint;     // p_0
  std::vector<PointId> chain;    // p_t, ..., p_0
};

// Builds a t-robust chain from w against P. kExact mode uses the exact
// 1-median over ball + p_i; kSampled uses FastOneMedian.
MakeRobustResult MakeRobust(const DistanceOracle& space, const PointSet& points, PointId w, int t,
                            const SolverConfig& cfg, Rng& rng);

// (W - U_init) plus every shared center u with some p in P0 (+) P1 at
// distance <= 2 * 10^t[u] from u. Records of shared centers come from U_init.
std::set<PointId> FindSuspects(const DistanceOracle& space, const PointSet& p0,
                               const PointSet& p1, std::span<const PointId> W,
                               const RobustSolution& u_init);

// Whether point q lies in the outermost ball of u's chain:
// d(q, anchor) <= 10^t[u].
bool Contaminates(const DistanceOracle& space, PointId q, const CenterRecord& rec);

struct RobustifyStats {
  std::int64_t type1_calls = 0;  // center absent from U_init
  std::int64_t type2_calls = 0;  // shared center, contaminated
  std::int64_t type3_calls = 0;  // shared center, clean
  std::int64_t scan_rounds = 0;
  // MakeRobust invoked on a point that an earlier call of the same
  // invocation returned. Always 0 when the algorithm behaves as analyzed.
  std::int64_t repeat_calls = 0;
  std::int64_t merged_centers = 0;

  std::int64_t calls() const { return type1_calls + type2_calls + type3_calls; }
  RobustifyStats& operator+=(const RobustifyStats& o);
};

struct RobustifyResult {
  RobustSolution solution;
  RobustifyStats stats;
};

// Separation used by the robustness thresholds: d(w, W - w), or delta when
// w is the only center.
double Separation(const DistanceOracle& space, PointId w, std::span<const PointId> centers,
                  double delta);

// Restores robustness of W with respect to P1. Suspects are processed by
// smallest id; after every replacement all centers are rescanned against the
// 200-rule. W must be nonempty.
RobustifyResult Robustify(const DistanceOracle& space, const PointSet& p0, const PointSet& p1,
                          std::span<const PointId> W, const RobustSolution& u_init, double delta,
                          const SolverConfig& cfg, Rng& rng);

struct RobustCheck {
  bool ok = true;
  std::string reason;  // first failure
};

// Checks every center: t[u] >= CeilLog10(sep / 200) (clamped at 0) and the
// stored chain is a valid t[u]-robust chain against P, each accepted step
// satisfying cost(p_{i-1}, B_i) <= min(3 OPT_1(B_i), cost(p_i, B_i)) with
// OPT_1 over `opt_candidates` (the whole ground space when empty).
RobustCheck VerifyRobust(const DistanceOracle& space, const PointSet& points,
                         const RobustSolution& sol, double delta,
                         std::span<const PointId> opt_candidates = {});

// Chain geometry: d(p_{i-1}, p_i) <= 10^i / 2, d(p_0, p_i) <= 10^i / 2 and
// Ball(p_{i-1}, 10^{i-1}) within Ball(p_i, 10^i) over P, for every i.
RobustCheck CheckChainGeometry(const DistanceOracle& space, const PointSet& points,
                               std::span<const PointId> chain);

}  // namespace dynkmed

#endif  // DYNKMED_ROBUSTIFY_HPP_
