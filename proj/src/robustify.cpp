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

#include "dynkmed/robustify.hpp"

#include <algorithm>
#include <cmath>

#include "dynkmed/oracles.hpp"

namespace dynkmed {

namespace {

constexpr double kRelTol = 1e-9;

bool LessOrClose(double lhs, double rhs) {
  return lhs <= rhs + kRelTol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double Pow10(int t) { return std::pow(10.0, t); }

}  // namespace

int CeilLog10(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) Fail(ErrorCode::kInvalidArgument, "CeilLog10 needs x > 0");
  int t = static_cast<int>(std::ceil(std::log10(x)));
  while (Pow10(t) < x) ++t;
  while (Pow10(t - 1) >= x) --t;
  return t;
}

RobustSolution RobustSolution::FromCenters(std::span<const PointId> centers) {
  RobustSolution sol;
  for (PointId c : centers) sol.Put(CenterRecord::Plain(c));
  return sol;
}

const CenterRecord& RobustSolution::At(PointId c) const {
  auto it = records_.find(c);
  if (it == records_.end()) Fail(ErrorCode::kUnknownId, "no center " + IdString(c));
  return it->second;
}

void RobustSolution::Put(CenterRecord rec) {
  const PointId c = rec.center;
  records_[c] = std::move(rec);
}

void RobustSolution::Erase(PointId c) {
  if (records_.erase(c) == 0) Fail(ErrorCode::kUnknownId, "no center " + IdString(c));
}

CenterSet RobustSolution::Centers() const {
  CenterSet out;
  out.reserve(records_.size());
  for (const auto& [c, rec] : records_) out.push_back(c);
  return out;
}

MakeRobustResult MakeRobust(const DistanceOracle& space, const PointSet& points, PointId w, int t,
                            const SolverConfig& cfg, Rng& rng) {
  if (t < 0) Fail(ErrorCode::kInvalidArgument, "MakeRobust needs t >= 0");
  MakeRobustResult out;
  out.chain.reserve(static_cast<std::size_t>(t) + 1);
  out.chain.push_back(w);
  PointId p = w;
  for (int i = t; i >= 1; --i) {
    const double radius = Pow10(i);
    const PointSet ball = Ball(space, points, p, radius);
    PointId next = p;
    if (!ball.empty()) {
      const double here = OneMedianCost(space, ball, p);
      if (here / ball.TotalWeight() < radius / 5.0) {
        const PointId q = cfg.mode == SubroutineMode::kExact
                              ? ExactOneMedian(space, ball, p)
                              : FastOneMedian(space, ball, p, cfg, rng, points.size());
        if (OneMedianCost(space, ball, q) < here) next = q;
      }
    }
    out.chain.push_back(next);
    p = next;
  }
  out.center = p;
  return out;
}

bool Contaminates(const DistanceOracle& space, PointId q, const CenterRecord& rec) {
  return space.Distance(q, rec.anchor) <= Pow10(rec.t_level);
}

std::set<PointId> FindSuspects(const DistanceOracle& space, const PointSet& p0,
                               const PointSet& p1, std::span<const PointId> W,
                               const RobustSolution& u_init) {
  const std::vector<PointId> changed = SymmetricDifferenceIds(p0, p1);
  std::set<PointId> suspects;
  for (PointId u : W) {
    if (!u_init.Contains(u)) {
      suspects.insert(u);
      continue;
    }
    const double reach = 2.0 * Pow10(u_init.At(u).t_level);
    for (PointId q : changed) {
      if (space.Distance(u, q) <= reach) {
        suspects.insert(u);
        break;
      }
    }
  }
  return suspects;
}

RobustifyStats& RobustifyStats::operator+=(const RobustifyStats& o) {
  type1_calls += o.type1_calls;
  type2_calls += o.type2_calls;
  type3_calls += o.type3_calls;
  scan_rounds += o.scan_rounds;
  repeat_calls += o.repeat_calls;
  merged_centers += o.merged_centers;
  return *this;
}

double Separation(const DistanceOracle& space, PointId w, std::span<const PointId> centers,
                  double delta) {
  double best = kInfinity;
  for (PointId c : centers) {
    if (c != w) best = std::min(best, space.Distance(w, c));
  }
  return std::isinf(best) ? delta : best;
}

RobustifyResult Robustify(const DistanceOracle& space, const PointSet& p0, const PointSet& p1,
                          std::span<const PointId> W, const RobustSolution& u_init, double delta,
                          const SolverConfig& cfg, Rng& rng) {
  const CenterSet start = Normalize({W.begin(), W.end()});
  if (start.empty()) Fail(ErrorCode::kInvalidArgument, "Robustify needs a nonempty center set");
  RobustifyResult out;
  RobustSolution& sol = out.solution;
  for (PointId w : start) {
    sol.Put(u_init.Contains(w) ? u_init.At(w) : CenterRecord::Plain(w));
  }

  const std::vector<PointId> changed = SymmetricDifferenceIds(p0, p1);
  auto contaminated = [&](PointId u) {
    const CenterRecord& rec = u_init.At(u);
    return std::any_of(changed.begin(), changed.end(),
                       [&](PointId q) { return Contaminates(space, q, rec); });
  };

  std::set<PointId> suspects = FindSuspects(space, p0, p1, start, u_init);
  std::set<PointId> produced;
  while (!suspects.empty()) {
    const PointId w = *suspects.begin();
    suspects.erase(suspects.begin());
    if (!sol.Contains(w)) continue;

    CenterSet centers = sol.Centers();
    const int t = CeilLog10(Separation(space, w, centers, delta) / 100.0);
    CenterRecord rec = CenterRecord::Plain(w);
    if (t >= 0) {
      if (produced.count(w) != 0) ++out.stats.repeat_calls;
      if (!u_init.Contains(w)) {
        ++out.stats.type1_calls;
      } else if (contaminated(w)) {
        ++out.stats.type2_calls;
      } else {
        ++out.stats.type3_calls;
      }
      MakeRobustResult made = MakeRobust(space, p1, w, t, cfg, rng);
      produced.insert(made.center);
      rec = {made.center, t, w, std::move(made.chain)};
    }

    sol.Erase(w);
    if (sol.Contains(rec.center)) {
      ++out.stats.merged_centers;
      if (sol.At(rec.center).t_level < rec.t_level) sol.Put(std::move(rec));
    } else {
      sol.Put(std::move(rec));
    }

    ++out.stats.scan_rounds;
    centers = sol.Centers();
    for (PointId u : centers) {
      const int need = CeilLog10(Separation(space, u, centers, delta) / 200.0);
      if (need > sol.At(u).t_level) suspects.insert(u);
    }
  }
  return out;
}

RobustCheck VerifyRobust(const DistanceOracle& space, const PointSet& points,
                         const RobustSolution& sol, double delta,
                         std::span<const PointId> opt_candidates) {
  std::vector<PointId> ground;
  if (opt_candidates.empty()) {
    ground = space.GroundIds();
    opt_candidates = ground;
  }
  const CenterSet centers = sol.Centers();
  auto fail = [](PointId c, const std::string& why) {
    return RobustCheck{false, "center " + IdString(c) + ": " + why};
  };
  for (const auto& [c, rec] : sol.records()) {
    const int need = std::max(0, CeilLog10(Separation(space, c, centers, delta) / 200.0));
    if (rec.t_level < need) {
      return fail(c, "t=" + std::to_string(rec.t_level) + " below required " +
                         std::to_string(need));
    }
    const int t = rec.t_level;
    if (rec.chain.size() != static_cast<std::size_t>(t) + 1 || rec.chain.front() != rec.anchor ||
        rec.chain.back() != c) {
      return fail(c, "malformed chain");
    }
    for (int i = t; i >= 1; --i) {
      const PointId p = rec.chain[static_cast<std::size_t>(t - i)];
      const PointId next = rec.chain[static_cast<std::size_t>(t - i + 1)];
      const double radius = Pow10(i);
      const PointSet ball = Ball(space, points, p, radius);
      if (ball.empty()) {
        if (next != p) return fail(c, "moved on an empty ball at level " + std::to_string(i));
        continue;
      }
      const double here = OneMedianCost(space, ball, p);
      if (here / ball.TotalWeight() >= radius / 5.0) {
        if (next != p) return fail(c, "moved on a sparse ball at level " + std::to_string(i));
        continue;
      }
      if (next != p && !ball.Contains(next)) {
        return fail(c, "step outside the ball at level " + std::to_string(i));
      }
      const double opt1 = OptExact(space, ball, 1, opt_candidates).cost;
      const double there = OneMedianCost(space, ball, next);
      if (!LessOrClose(there, std::min(3.0 * opt1, here))) {
        return fail(c, "step too expensive at level " + std::to_string(i));
      }
    }
  }
  return {};
}

RobustCheck CheckChainGeometry(const DistanceOracle& space, const PointSet& points,
                               std::span<const PointId> chain) {
  if (chain.empty()) return {false, "empty chain"};
  const int t = static_cast<int>(chain.size()) - 1;
  const PointId p0 = chain.back();
  for (int i = t; i >= 1; --i) {
    const PointId p = chain[static_cast<std::size_t>(t - i)];
    const PointId next = chain[static_cast<std::size_t>(t - i + 1)];
    const double half = Pow10(i) / 2.0;
    if (!LessOrClose(space.Distance(p, next), half) || !LessOrClose(space.Distance(p0, p), half)) {
      return {false, "chain drifts at level " + std::to_string(i)};
    }
    const PointSet inner = Ball(space, points, next, Pow10(i - 1));
    const PointSet outer = Ball(space, points, p, Pow10(i));
    for (const auto& x : inner) {
      if (!outer.Contains(x.id)) return {false, "balls not nested at level " + std::to_string(i)};
    }
  }
  return {};
}

}  // namespace dynkmed
