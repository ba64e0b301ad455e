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

#include "dynkmed/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dynkmed {

namespace {

constexpr double kRelTol = 1e-9;

bool LessOrClose(double lhs, double rhs) {
  return lhs <= rhs + kRelTol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Depth-first enumeration of size-`m` subsets in lexicographic order, with
// per-level running minima so each leaf costs O(n).
class SubsetEnumerator {
 public:
  SubsetEnumerator(const std::vector<double>& dist, const std::vector<double>& weights,
                   std::size_t num_candidates, std::size_t m)
      : dist_(dist),
        weights_(weights),
        n_(weights.size()),
        c_(num_candidates),
        m_(m),
        mins_((m + 1) * weights.size(), kInfinity),
        chosen_(m) {}

  void Run() { Recurse(0, 0); }

  double best_cost() const { return best_cost_; }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void Recurse(std::size_t depth, std::size_t start) {
    if (depth == m_) {
      const double* mins = &mins_[depth * n_];
      double cost = 0.0;
      for (std::size_t p = 0; p < n_; ++p) cost += weights_[p] * mins[p];
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = chosen_;
      }
      return;
    }
    for (std::size_t c = start; c + (m_ - depth) <= c_; ++c) {
      chosen_[depth] = c;
      const double* prev = &mins_[depth * n_];
      double* next = &mins_[(depth + 1) * n_];
      const double* row = &dist_[c * n_];
      for (std::size_t p = 0; p < n_; ++p) next[p] = std::min(prev[p], row[p]);
      Recurse(depth + 1, c + 1);
    }
  }

  const std::vector<double>& dist_;
  const std::vector<double>& weights_;
  std::size_t n_;
  std::size_t c_;
  std::size_t m_;
  std::vector<double> mins_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInfinity;
};

}  // namespace

std::uint64_t Binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // result * (n - r + i) / i is exact at every step.
    const std::uint64_t factor = n - r + i;
    if (result > kMax / factor) return kMax;
    result = result * factor / i;
  }
  return result;
}

OptResult OptExact(const DistanceOracle& space, const PointSet& points, std::size_t k,
                   std::span<const PointId> candidates, std::uint64_t budget) {
  if (k == 0) Fail(ErrorCode::kInvalidArgument, "k must be positive");
  const CenterSet cands = Normalize({candidates.begin(), candidates.end()});
  if (cands.empty()) Fail(ErrorCode::kInvalidArgument, "empty candidate set");
  const std::size_t m = std::min(k, cands.size());
  const std::uint64_t subsets = Binomial(cands.size(), m);
  if (subsets > budget) {
    Fail(ErrorCode::kBudgetExceeded, "exact optimum needs " + std::to_string(subsets) +
                                         " subsets, budget is " + std::to_string(budget));
  }
  if (points.empty()) return {0.0, CenterSet(cands.begin(), cands.begin() + m)};

  std::vector<double> weights;
  weights.reserve(points.size());
  for (const auto& p : points) weights.push_back(p.weight);
  std::vector<double> dist(cands.size() * points.size());
  for (std::size_t c = 0; c < cands.size(); ++c) {
    std::size_t j = 0;
    for (const auto& p : points) dist[c * points.size() + j++] = space.Distance(cands[c], p.id);
  }
  SubsetEnumerator search(dist, weights, cands.size(), m);
  search.Run();
  OptResult result{search.best_cost(), {}};
  for (std::size_t idx : search.best()) result.centers.push_back(cands[idx]);
  return result;
}

OptResult OptExactImproper(const DistanceOracle& space, const PointSet& points, std::size_t k,
                           std::uint64_t budget) {
  const std::vector<PointId> ground = space.GroundIds();
  return OptExact(space, points, k, ground, budget);
}

OptCurve OptCurveExact(const DistanceOracle& space, const PointSet& points, std::size_t k_min,
                       std::size_t k_max, std::span<const PointId> candidates,
                       std::uint64_t budget) {
  if (k_min == 0 || k_min > k_max) Fail(ErrorCode::kInvalidArgument, "bad k range for OPT curve");
  OptCurve curve;
  for (std::size_t m = k_min; m <= k_max; ++m) {
    OptResult r = OptExact(space, points, m, candidates, budget);
    curve.values[m] = r.cost;
    curve.witnesses[m] = std::move(r.centers);
  }
  return curve;
}

bool IsWellSeparated(const DistanceOracle& space, PointId u, std::span<const PointId> U, PointId v,
                     std::span<const PointId> V, double gamma) {
  auto isolation = [&](PointId x, std::span<const PointId> set) {
    double best = kInfinity;
    for (PointId y : set) {
      if (y != x) best = std::min(best, space.Distance(x, y));
    }
    return best;
  };
  const double duv = space.Distance(u, v);
  return isolation(u, U) >= gamma * duv && isolation(v, V) >= gamma * duv;
}

bool CheckLazyUpdatesLemma(const DistanceOracle& space, const PointSet& before,
                           const PointSet& after, std::size_t k, std::uint64_t budget) {
  const std::size_t s = SymmetricDifferenceIds(before, after).size();
  const double lhs = OptExactImproper(space, after, k + s, budget).cost;
  const double rhs = OptExactImproper(space, before, k, budget).cost;
  return LessOrClose(lhs, rhs);
}

StabilityCheck CheckDoubleSidedStability(const DistanceOracle& space, const PointSet& points,
                                         std::size_t k, std::size_t r, double eta,
                                         std::uint64_t budget) {
  if (k == 0 || r >= k) Fail(ErrorCode::kInvalidArgument, "stability check needs 0 <= r <= k-1");
  if (!(eta >= 1.0)) Fail(ErrorCode::kInvalidArgument, "stability check needs eta >= 1");
  const double opt_k = OptExactImproper(space, points, k, budget).cost;
  const double opt_smaller = OptExactImproper(space, points, k - r, budget).cost;
  if (!LessOrClose(opt_smaller, eta * opt_k)) return {StabilityVerdict::kHypothesisUnmet};
  const auto extra = static_cast<std::size_t>(std::floor(static_cast<double>(r) / (12.0 * eta)));
  const double opt_larger = OptExactImproper(space, points, k + extra, budget).cost;
  return {LessOrClose(opt_k, 4.0 * opt_larger) ? StabilityVerdict::kHolds
                                               : StabilityVerdict::kViolated};
}

bool CheckProjectionLemma(const DistanceOracle& space, const PointSet& points,
                          std::span<const PointId> U, std::size_t k, std::uint64_t budget) {
  if (U.size() < k) Fail(ErrorCode::kInvalidArgument, "projection lemma needs |U| >= k");
  const double lhs = OptExact(space, points, k, U, budget).cost;
  const double rhs =
      Cost(space, U, points) + 2.0 * OptExactImproper(space, points, k, budget).cost;
  return LessOrClose(lhs, rhs);
}

}  // namespace dynkmed
