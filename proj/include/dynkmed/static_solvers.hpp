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

#ifndef DYNKMED_STATIC_SOLVERS_HPP_
#define DYNKMED_STATIC_SOLVERS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dynkmed/metric.hpp"
#include "dynkmed/oracles.hpp"
#include "dynkmed/random.hpp"

namespace dynkmed {

// kExact swaps every randomized or heuristic subroutine for its exact
// counterpart wherever the enumeration budget allows. Used by oracle-checked
// runs; never the default.
enum class SubroutineMode { kSampled, kExact };

struct SolverConfig {
  // One-median samples = multiplier * ceil(log2 n), at least 1.
  int sample_count_multiplier = 3;
  // The static approximation factor the callers budget for.
  double beta_target = 5.0;
  std::uint64_t rng_seed = 1;
  // Swap local search stops when no swap improves cost by a factor
  // (1 - swap_improvement_factor / k).
  double swap_improvement_factor = 0.05;
  // Swap-in pool size = multiplier * k * ceil(log2 n) when smaller than the
  // candidate set; 0 evaluates every candidate.
  int swap_candidate_multiplier = 2;
  // Randomized local search iterations = multiplier * s * ceil(log2(n + 2)).
  int ls_iteration_multiplier = 8;
  SubroutineMode mode = SubroutineMode::kSampled;
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;

  void Validate() const;
};

// ceil(log2(max(n, 2))).
int CeilLog2(std::size_t n);

// sum_{p in ball} w(p) d(center, p).
double OneMedianCost(const DistanceOracle& space, const PointSet& ball, PointId center);

// Samples multiplier * ceil(log2 n) members of `ball` proportionally to weight
// (inverse CDF over id order) and returns the cheapest of samples + anchor,
// ties to the smallest id. Empty ball returns the anchor. `n` is the size of
// the surrounding instance (defaults to |ball|).
PointId FastOneMedian(const DistanceOracle& space, const PointSet& ball, PointId anchor,
                      const SolverConfig& cfg, Rng& rng, std::size_t n = 0);

// argmin over ball + anchor, ties to the smallest id.
PointId ExactOneMedian(const DistanceOracle& space, const PointSet& ball, PointId anchor);

// Weighted single-swap local search seeded by D-sampling. Returns at most k
// centers drawn from `candidates`. In kExact mode solves exactly when the
// enumeration budget allows.
CenterSet StaticKMedian(const DistanceOracle& space, const PointSet& points, std::size_t k,
                        std::span<const PointId> candidates, const SolverConfig& cfg, Rng& rng);

struct StaticKMedianResult {
  CenterSet centers;
  // Solution cost after seeding and after every applied swap.
  std::vector<double> cost_trace;
};

StaticKMedianResult StaticKMedianTraced(const DistanceOracle& space, const PointSet& points,
                                        std::size_t k, std::span<const PointId> candidates,
                                        const SolverConfig& cfg, Rng& rng);

}  // namespace dynkmed

#endif  // DYNKMED_STATIC_SOLVERS_HPP_
