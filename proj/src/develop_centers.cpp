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

#include "dynkmed/develop_centers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynkmed {

namespace {

constexpr double kUncached = std::numeric_limits<double>::quiet_NaN();

// Dense caching is used while ids stay reasonably compact.
bool UseDenseCache(std::uint32_t max_raw, std::size_t count) {
  return max_raw < 8 * count + 65536;
}

}  // namespace

ContractedSpace::ContractedSpace(const DistanceOracle& base, std::span<const PointId> fixed,
                                 std::span<const PointId> hot_ids)
    : base_(base),
      fixed_(Normalize({fixed.begin(), fixed.end()})),
      hot_(Normalize({hot_ids.begin(), hot_ids.end()})) {
  if (fixed_.empty()) Fail(ErrorCode::kInvalidArgument, "contraction needs a nonempty center set");
  if (ContainsId(fixed_, kStarId) || ContainsId(hot_, kStarId)) {
    Fail(ErrorCode::kInvalidArgument, "the reserved id cannot be contracted");
  }
  if (hot_.empty()) return;
  const std::uint32_t max_raw = Raw(hot_.back());
  if (UseDenseCache(max_raw, hot_.size())) {
    to_fixed_.assign(static_cast<std::size_t>(max_raw) + 1, kUncached);
    for (PointId p : hot_) to_fixed_[Raw(p)] = DistanceToSet(base_, p, fixed_);
  } else {
    // Parallel to hot_.
    to_fixed_.reserve(hot_.size());
    for (PointId p : hot_) to_fixed_.push_back(DistanceToSet(base_, p, fixed_));
  }
}

double ContractedSpace::DistanceToFixed(PointId p) const {
  if (p == kStarId) return 0.0;
  if (!hot_.empty() && UseDenseCache(Raw(hot_.back()), hot_.size())) {
    if (Raw(p) < to_fixed_.size() && !std::isnan(to_fixed_[Raw(p)])) return to_fixed_[Raw(p)];
  } else {
    auto it = std::lower_bound(hot_.begin(), hot_.end(), p);
    if (it != hot_.end() && *it == p) return to_fixed_[static_cast<std::size_t>(it - hot_.begin())];
  }
  return DistanceToSet(base_, p, fixed_);
}

double ContractedSpace::Distance(PointId p, PointId q) const {
  if (p == q) return 0.0;
  if (p == kStarId) return DistanceToFixed(q);
  if (q == kStarId) return DistanceToFixed(p);
  return std::min(DistanceToFixed(p) + DistanceToFixed(q), base_.Distance(p, q));
}

bool ContractedSpace::Contains(PointId p) const { return p == kStarId || base_.Contains(p); }

std::vector<PointId> ContractedSpace::GroundIds() const {
  std::vector<PointId> ids = hot_;
  ids.push_back(kStarId);  // largest raw value, so the order is kept
  return ids;
}

Contraction Contract(const PointSet& points, std::span<const PointId> fixed, double beta,
                     double delta, const DevelopConfig& dcfg) {
  const CenterSet U = Normalize({fixed.begin(), fixed.end()});
  if (U.empty()) Fail(ErrorCode::kInvalidArgument, "contraction needs a nonempty center set");
  Contraction out;
  std::vector<WeightedPoint> kept;
  for (const auto& p : points) {
    if (!ContainsId(U, p.id)) kept.push_back(p);
  }
  if (kept.empty()) return out;
  const double nominal = beta * static_cast<double>(points.size()) * points.MaxWeight() *
                         std::max(delta, 1.0);
  out.star_weight = nominal;
  if (!(nominal <= dcfg.max_star_weight)) {
    out.star_weight = dcfg.max_star_weight;
    out.capped = true;
  }
  kept.push_back({kStarId, out.star_weight});
  out.points = PointSet(std::move(kept));
  return out;
}

DevelopResult DevelopCenters(const DistanceOracle& space, const PointSet& points,
                             std::span<const PointId> fixed, std::size_t s, double delta,
                             const SolverConfig& cfg, Rng& rng, const DevelopConfig& dcfg) {
  if (s == 0) Fail(ErrorCode::kInvalidArgument, "DevelopCenters needs s >= 1");
  DevelopResult result;
  result.centers = Normalize({fixed.begin(), fixed.end()});
  const Contraction c = Contract(points, result.centers, cfg.beta_target, delta, dcfg);
  result.weight_capped = c.capped;
  if (c.points.empty()) return result;

  const std::vector<PointId> ids = c.points.Ids();
  const ContractedSpace contracted(space, result.centers,
                                   std::span<const PointId>(ids.data(), ids.size() - 1));
  CenterSet F = StaticKMedian(contracted, c.points, s + 1, ids, cfg, rng);

  if (!ContainsId(F, kStarId)) {
    result.star_forced = true;
    std::size_t drop = 0;
    double best = kInfinity;
    for (std::size_t i = 0; i < F.size(); ++i) {
      CenterSet trial = F;
      trial[i] = kStarId;
      const double cost = Cost(contracted, trial, c.points);
      if (cost < best) {
        best = cost;
        drop = i;
      }
    }
    if (F.size() <= s) {
      F.push_back(kStarId);
    } else {
      F[drop] = kStarId;
    }
    F = Normalize(std::move(F));
  }

  for (PointId f : F) {
    if (f != kStarId) result.added.push_back(f);
  }
  result.centers.insert(result.centers.end(), result.added.begin(), result.added.end());
  result.centers = Normalize(std::move(result.centers));
  return result;
}

}  // namespace dynkmed
