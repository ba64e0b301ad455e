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

// Extending a fixed center set by a few new centers. The fixed set U is
// contracted into a single heavy point u* and the problem becomes an
// (s+1)-median instance on the contracted metric.

#ifndef DYNKMED_DEVELOP_CENTERS_HPP_
#define DYNKMED_DEVELOP_CENTERS_HPP_

#include <span>
#include <vector>

#include "dynkmed/metric.hpp"
#include "dynkmed/random.hpp"
#include "dynkmed/static_solvers.hpp"

namespace dynkmed {

// The synthetic super-point. Never a ground id.
inline constexpr PointId kStarId = kNoPoint;

// d'(x, u*) = d(x, U);  d'(x, y) = min(d(x, U) + d(y, U), d(x, y)).
// d(x, U) is precomputed for the ids handed to the constructor and computed
// on demand for anything else.
class ContractedSpace final : public DistanceOracle {
 public:
  ContractedSpace(const DistanceOracle& base, std::span<const PointId> fixed,
                  std::span<const PointId> hot_ids);

  double Distance(PointId p, PointId q) const override;
  bool Contains(PointId p) const override;
  // Every precomputed id plus u*.
  std::vector<PointId> GroundIds() const override;

  double DistanceToFixed(PointId p) const;
  const CenterSet& fixed() const { return fixed_; }

 private:
  const DistanceOracle& base_;
  CenterSet fixed_;
  CenterSet hot_;
  std::vector<double> to_fixed_;  // indexed by raw id; NaN when not cached
};

struct DevelopConfig {
  // Upper bound on w(u*). The nominal value beta * n * W * delta is used when
  // it is smaller.
  double max_star_weight = 1e250;
};

struct Contraction {
  PointSet points;  // P' = (P - U) + u*
  double star_weight = 0.0;
  bool capped = false;
};

// Builds P'. `delta` is the aspect-ratio bound of the base space. U must be
// nonempty. When P - U is empty, P' is empty as well.
Contraction Contract(const PointSet& points, std::span<const PointId> fixed, double beta,
                     double delta, const DevelopConfig& dcfg = {});

struct DevelopResult {
  CenterSet centers;  // U + (F - u*)
  CenterSet added;    // F - u*
  bool star_forced = false;
  bool weight_capped = false;
};

// Returns U plus at most s points of P chosen by a static (s+1)-median solve
// on the contracted instance. u* is always kept in F; when the solver drops
// it, the member of F whose removal costs least is replaced by u*.
DevelopResult DevelopCenters(const DistanceOracle& space, const PointSet& points,
                             std::span<const PointId> fixed, std::size_t s, double delta,
                             const SolverConfig& cfg, Rng& rng, const DevelopConfig& dcfg = {});

}  // namespace dynkmed

#endif  // DYNKMED_DEVELOP_CENTERS_HPP_
