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

// Exact brute-force k-median solvers and checkers for the structural
// inequalities the dynamic algorithm relies on. Ground truth for tests and
// the `check` harness; never used on the update path.

#ifndef DYNKMED_ORACLES_HPP_
#define DYNKMED_ORACLES_HPP_

#include <cstdint>
#include <map>
#include <span>

#include "dynkmed/metric.hpp"

namespace dynkmed {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 2'000'000;

struct OptResult {
  double cost = 0.0;
  CenterSet centers;
};

// C(n, r), saturating at UINT64_MAX.
std::uint64_t Binomial(std::uint64_t n, std::uint64_t r);

// Exact OPT^C_k(P): minimum over subsets of `candidates` with at most k
// members. Enumerates subsets of size min(k, |C|) in lexicographic order and
// returns the first optimum. Refuses (kBudgetExceeded) when that count
// exceeds `budget`.
OptResult OptExact(const DistanceOracle& space, const PointSet& points, std::size_t k,
                   std::span<const PointId> candidates,
                   std::uint64_t budget = kDefaultEnumerationBudget);

// Improper optimum: candidates are the whole ground space.
OptResult OptExactImproper(const DistanceOracle& space, const PointSet& points, std::size_t k,
                           std::uint64_t budget = kDefaultEnumerationBudget);

struct OptCurve {
  std::map<std::size_t, double> values;
  std::map<std::size_t, CenterSet> witnesses;
};

OptCurve OptCurveExact(const DistanceOracle& space, const PointSet& points, std::size_t k_min,
                       std::size_t k_max, std::span<const PointId> candidates,
                       std::uint64_t budget = kDefaultEnumerationBudget);

// d(u, U - u) >= gamma d(u, v) and d(v, V - v) >= gamma d(u, v); a singleton
// side counts as infinitely isolated.
bool IsWellSeparated(const DistanceOracle& space, PointId u, std::span<const PointId> U, PointId v,
                     std::span<const PointId> V, double gamma);

// OPT_{k+s}(P') <= OPT_k(P) with s = |P (+) P'| (weight changes included).
bool CheckLazyUpdatesLemma(const DistanceOracle& space, const PointSet& before,
                           const PointSet& after, std::size_t k,
                           std::uint64_t budget = kDefaultEnumerationBudget);

enum class StabilityVerdict { kHolds, kHypothesisUnmet, kViolated };

struct StabilityCheck {
  StabilityVerdict verdict = StabilityVerdict::kHolds;
  // True unless the conclusion was evaluated and failed.
  bool ok() const { return verdict != StabilityVerdict::kViolated; }
};

// If OPT_{k-r}(P) <= eta OPT_k(P) then OPT_k(P) <= 4 OPT_{k + floor(r / (12 eta))}(P).
// Requires 0 <= r <= k - 1 and eta >= 1.
StabilityCheck CheckDoubleSidedStability(const DistanceOracle& space, const PointSet& points,
                                         std::size_t k, std::size_t r, double eta,
                                         std::uint64_t budget = kDefaultEnumerationBudget);

// OPT^U_k(P) <= cost(U, P) + 2 OPT_k(P), |U| >= k.
bool CheckProjectionLemma(const DistanceOracle& space, const PointSet& points,
                          std::span<const PointId> U, std::size_t k,
                          std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace dynkmed

#endif  // DYNKMED_ORACLES_HPP_
