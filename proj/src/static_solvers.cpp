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

#include "dynkmed/static_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dynkmed {

void SolverConfig::Validate() const {
  if (sample_count_multiplier < 1) {
    Fail(ErrorCode::kInvalidArgument, "sample_count_multiplier must be >= 1");
  }
  if (!(beta_target > 1.0)) Fail(ErrorCode::kInvalidArgument, "beta_target must be > 1");
  if (!(swap_improvement_factor > 0.0 && swap_improvement_factor < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "swap_improvement_factor must lie in (0, 1)");
  }
  if (swap_candidate_multiplier < 0) {
    Fail(ErrorCode::kInvalidArgument, "swap_candidate_multiplier must be >= 0");
  }
  if (ls_iteration_multiplier < 1) {
    Fail(ErrorCode::kInvalidArgument, "ls_iteration_multiplier must be >= 1");
  }
}

int CeilLog2(std::size_t n) {
  n = std::max<std::size_t>(n, 2);
  int bits = 0;
  std::size_t v = 1;
  while (v < n) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

double OneMedianCost(const DistanceOracle& space, const PointSet& ball, PointId center) {
  double total = 0.0;
  for (const auto& p : ball) total += p.weight * space.Distance(center, p.id);
  return total;
}

PointId FastOneMedian(const DistanceOracle& space, const PointSet& ball, PointId anchor,
                      const SolverConfig& cfg, Rng& rng, std::size_t n) {
  if (ball.empty()) return anchor;
  if (n == 0) n = ball.size();
  const int samples = std::max(1, cfg.sample_count_multiplier * CeilLog2(n));

  const auto pts = ball.points();
  std::vector<double> prefix(pts.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) prefix[i] = running += pts[i].weight;
  const double total = prefix.back();

  std::vector<PointId> candidates{anchor};
  for (int s = 0; s < samples; ++s) {
    const double target = UniformUnit(rng) * total;
    auto it = std::lower_bound(prefix.begin(), prefix.end(), target);
    if (it == prefix.end()) --it;
    candidates.push_back(pts[static_cast<std::size_t>(it - prefix.begin())].id);
  }
  candidates = Normalize(std::move(candidates));

  PointId best = kNoPoint;
  double best_cost = kInfinity;
  for (PointId c : candidates) {
    const double cost = OneMedianCost(space, ball, c);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

PointId ExactOneMedian(const DistanceOracle& space, const PointSet& ball, PointId anchor) {
  std::vector<PointId> candidates = ball.Ids();
  candidates.push_back(anchor);
  candidates = Normalize(std::move(candidates));
  PointId best = kNoPoint;
  double best_cost = kInfinity;
  for (PointId c : candidates) {
    const double cost = OneMedianCost(space, ball, c);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

namespace {

// Nearest / second-nearest bookkeeping for the swap search.
struct Assignment {
  std::vector<std::size_t> nearest;  // index into centers
  std::vector<double> d1;
  std::vector<double> d2;
  double cost = 0.0;
};

Assignment Assign(DistanceColumns& columns, std::span<const WeightedPoint> pts,
                  const std::vector<PointId>& centers) {
  Assignment a;
  a.nearest.assign(pts.size(), 0);
  a.d1.assign(pts.size(), kInfinity);
  a.d2.assign(pts.size(), kInfinity);
  std::vector<const double*> cols;
  cols.reserve(centers.size());
  for (PointId c : centers) cols.push_back(columns.Column(c));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = cols[c][i];
      if (d < a.d1[i] || (d == a.d1[i] && centers[c] < centers[a.nearest[i]])) {
        a.d2[i] = a.d1[i];
        a.d1[i] = d;
        a.nearest[i] = c;
      } else if (d < a.d2[i]) {
        a.d2[i] = d;
      }
    }
    a.cost += pts[i].weight * a.d1[i];
  }
  return a;
}

// Draws a point with probability proportional to w(p) * dist[p] (or w(p)
// when `dist` is empty). Returns npos when the total mass is zero.
std::size_t SampleIndex(std::span<const WeightedPoint> pts, const std::vector<double>& dist,
                        Rng& rng) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    total += pts[i].weight * (dist.empty() ? 1.0 : dist[i]);
  }
  if (!(total > 0.0) || !std::isfinite(total)) return static_cast<std::size_t>(-1);
  const double target = UniformUnit(rng) * total;
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double mass = pts[i].weight * (dist.empty() ? 1.0 : dist[i]);
    if (mass <= 0.0) continue;
    last_positive = i;
    running += mass;
    if (running >= target) return i;
  }
  return last_positive;
}

// Candidate representing a sampled point: the point itself when it is a
// candidate, else its nearest candidate not already chosen.
PointId ToCandidate(const DistanceOracle& space, PointId p, const CenterSet& cands,
                    const CenterSet& chosen) {
  if (ContainsId(cands, p) && !ContainsId(chosen, p)) return p;
  PointId best = kNoPoint;
  double best_d = kInfinity;
  for (PointId c : cands) {
    if (ContainsId(chosen, c)) continue;
    const double d = space.Distance(p, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

CenterSet Seed(const DistanceOracle& space, std::span<const WeightedPoint> pts, std::size_t k,
               const CenterSet& cands, Rng& rng) {
  CenterSet chosen;
  std::vector<double> dist;
  while (chosen.size() < k) {
    const std::size_t idx = SampleIndex(pts, dist, rng);
    if (idx == static_cast<std::size_t>(-1)) break;
    const PointId c = ToCandidate(space, pts[idx].id, cands, chosen);
    if (c == kNoPoint) break;
    chosen = Normalize([&] {
      auto v = chosen;
      v.push_back(c);
      return v;
    }());
    if (dist.empty()) dist.assign(pts.size(), kInfinity);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      dist[i] = std::min(dist[i], space.Distance(pts[i].id, c));
    }
  }
  // Everything is covered at zero cost: pad with the smallest unused ids.
  for (PointId c : cands) {
    if (chosen.size() >= k) break;
    if (!ContainsId(chosen, c)) {
      chosen.push_back(c);
      chosen = Normalize(std::move(chosen));
    }
  }
  return chosen;
}

}  // namespace

StaticKMedianResult StaticKMedianTraced(const DistanceOracle& space, const PointSet& points,
                                        std::size_t k, std::span<const PointId> candidates,
                                        const SolverConfig& cfg, Rng& rng) {
  if (k == 0) Fail(ErrorCode::kInvalidArgument, "k must be positive");
  const CenterSet cands = Normalize({candidates.begin(), candidates.end()});
  if (cands.empty()) Fail(ErrorCode::kInvalidArgument, "empty candidate set");
  StaticKMedianResult result;
  if (points.empty()) return result;
  if (cands.size() <= k) {
    result.centers = cands;
    result.cost_trace.push_back(Cost(space, result.centers, points));
    return result;
  }
  if (points.size() <= k && std::all_of(points.begin(), points.end(), [&](const WeightedPoint& p) {
        return ContainsId(cands, p.id);
      })) {
    result.centers = points.Ids();
    result.cost_trace.push_back(0.0);
    return result;
  }
  if (cfg.mode == SubroutineMode::kExact &&
      Binomial(cands.size(), k) <= cfg.enumeration_budget) {
    OptResult opt = OptExact(space, points, k, cands, cfg.enumeration_budget);
    result.centers = std::move(opt.centers);
    result.cost_trace.push_back(opt.cost);
    return result;
  }

  const auto pts = points.points();
  CenterSet centers = Seed(space, pts, k, cands, rng);

  CenterSet pool = cands;
  const std::size_t cap = cfg.swap_candidate_multiplier == 0
                              ? cands.size()
                              : static_cast<std::size_t>(cfg.swap_candidate_multiplier) * k *
                                    static_cast<std::size_t>(CeilLog2(points.size()));
  if (cap < cands.size()) {
    std::vector<double> dist(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = DistanceToSet(space, pts[i].id, centers);
    std::vector<PointId> drawn(centers.begin(), centers.end());
    for (std::size_t s = 0; s < cap; ++s) {
      const std::size_t idx = SampleIndex(pts, dist, rng);
      if (idx == static_cast<std::size_t>(-1)) break;
      const PointId c = ToCandidate(space, pts[idx].id, cands, {});
      if (c != kNoPoint) drawn.push_back(c);
    }
    pool = Normalize(std::move(drawn));
  }

  DistanceColumns columns(space, pts);
  Assignment assign = Assign(columns, pts, centers);
  result.cost_trace.push_back(assign.cost);
  const double keep_factor = 1.0 - cfg.swap_improvement_factor / static_cast<double>(k);
  std::vector<double> extra(centers.size());
  constexpr int kMaxRounds = 10'000;
  for (int round = 0; round < kMaxRounds; ++round) {
    double best_cost = kInfinity;
    PointId best_in = kNoPoint;
    std::size_t best_out = 0;
    for (PointId c : pool) {
      if (ContainsId(centers, c)) continue;
      std::fill(extra.begin(), extra.end(), 0.0);
      double base = 0.0;
      const double* col = columns.Column(c);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = col[i];
        const double keep = std::min(d, assign.d1[i]);
        base += pts[i].weight * keep;
        extra[assign.nearest[i]] += pts[i].weight * (std::min(d, assign.d2[i]) - keep);
      }
      for (std::size_t u = 0; u < centers.size(); ++u) {
        const double cost = base + extra[u];
        if (cost < best_cost) {
          best_cost = cost;
          best_in = c;
          best_out = u;
        }
      }
    }
    if (best_in == kNoPoint || !(best_cost < keep_factor * assign.cost)) break;
    CenterSet next = centers;
    next[best_out] = best_in;
    next = Normalize(std::move(next));
    Assignment next_assign = Assign(columns, pts, next);
    if (next_assign.cost > assign.cost) break;  // accumulated rounding only
    centers = std::move(next);
    assign = std::move(next_assign);
    result.cost_trace.push_back(assign.cost);
  }
  result.centers = std::move(centers);
  return result;
}

CenterSet StaticKMedian(const DistanceOracle& space, const PointSet& points, std::size_t k,
                        std::span<const PointId> candidates, const SolverConfig& cfg, Rng& rng) {
  return StaticKMedianTraced(space, points, k, candidates, cfg, rng).centers;
}

}  // namespace dynkmed
