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

#include "dynkmed/engine.hpp"

#include <algorithm>
#include <cmath>

#include "dynkmed/local_search.hpp"

namespace dynkmed {

EngineConfig EngineConfig::Paper(std::size_t k, double delta, double beta) {
  EngineConfig cfg;
  cfg.k = k;
  cfg.delta = delta;
  cfg.solver.beta_target = beta;
  cfg.gamma = 4000.0;
  cfg.big_c = 12.0 * 3e5 * cfg.gamma * beta * beta;
  cfg.removal_threshold = 14.0 * 400.0 * cfg.gamma * beta;
  cfg.stability_eta = 400.0 * cfg.gamma * beta;
  cfg.develop_slack_multiplier = 8.0 * cfg.big_c + 2.0;
  cfg.practical_mode = false;
  return cfg;
}

EngineConfig EngineConfig::Practical(std::size_t k, double delta) {
  EngineConfig cfg;
  cfg.k = k;
  cfg.delta = delta;
  cfg.gamma = 4.0;
  cfg.big_c = 12.0;
  cfg.removal_threshold = 14.0;
  cfg.stability_eta = 1.0;
  cfg.develop_slack_multiplier = 10.0;
  cfg.practical_mode = true;
  return cfg;
}

EngineConfig& EngineConfig::UseExactSubroutines(std::uint64_t budget) {
  solver.mode = SubroutineMode::kExact;
  solver.enumeration_budget = budget;
  return *this;
}

void EngineConfig::Validate() const {
  if (k == 0) Fail(ErrorCode::kInvalidArgument, "k must be positive");
  if (!(delta >= 1.0) || !std::isfinite(delta)) Fail(ErrorCode::kInvalidArgument, "delta must be >= 1");
  if (!(gamma >= 1.0)) Fail(ErrorCode::kInvalidArgument, "gamma must be >= 1");
  if (!(big_c >= 1.0)) Fail(ErrorCode::kInvalidArgument, "big_c must be >= 1");
  if (!(removal_threshold >= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "removal_threshold must be >= 1");
  }
  if (!(stability_eta >= 1.0)) Fail(ErrorCode::kInvalidArgument, "stability_eta must be >= 1");
  if (!(develop_slack_multiplier >= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "develop_slack_multiplier must be >= 1");
  }
  solver.Validate();
}

int ContaminationBound(double delta) { return CeilLog10(std::max(delta, 1.0)) + 2; }

Engine::Engine(const DistanceOracle& space, const EngineConfig& cfg)
    : space_(space),
      cfg_(cfg),
      ls_rng_(MakeRng(cfg.seed, "local-search")),
      one_median_rng_(MakeRng(cfg.seed, "one-median")),
      static_rng_(MakeRng(cfg.seed, "static")),
      develop_rng_(MakeRng(cfg.seed, "develop")),
      index_(space) {
  cfg_.Validate();
}

CenterSet Engine::CurrentSolution() const { return solution_; }

double Engine::CurrentCost() const {
  double total = 0.0;
  for (const auto& p : points_) total += p.weight * index_.Nearest(p.id).distance;
  return total;
}

CenterSet Engine::ProjectToProper() const {
  if (points_.empty()) Fail(ErrorCode::kInvalidArgument, "projection needs a nonempty input");
  const std::vector<PointId> ids = points_.Ids();
  CenterSet out;
  for (PointId c : solution_) out.push_back(Nearest(space_, c, ids).id);
  return Normalize(std::move(out));
}

void Engine::SetSolution(CenterSet next) { solution_ = Normalize(std::move(next)); }

void Engine::EnterBootstrap() {
  bootstrap_ = true;
  ++metrics_.bootstrap_entries;
  u_init_ = RobustSolution();
  p0_ = PointSet();
  ell_ = 0;
  seen_ = 0;
  epoch_start_cost_ = 0.0;
  SetSolution(points_.Ids());
}

Engine::Removal Engine::RemoveCenters() {
  const CenterSet U = u_init_.Centers();
  const double base = Cost(space_, U, p0_);
  std::vector<std::size_t> schedule{0};
  for (std::size_t r = 1; r <= cfg_.k; r *= 2) schedule.push_back(r);

  DistanceColumns columns(space_, p0_.points());
  Removal out;
  for (std::size_t r : schedule) {
    out.r_break = r;
    if (r == 0) continue;  // U itself never exceeds the threshold
    if (r >= U.size()) break;
    const CenterSet shrunk = RandLocalSearch(space_, p0_, U, r, cfg_.solver, ls_rng_, &columns);
    if (Cost(space_, shrunk, p0_) > cfg_.removal_threshold * base) break;
  }
  const std::size_t l_prime = out.r_break / 2;
  out.ell = static_cast<std::size_t>(std::floor(static_cast<double>(l_prime) / cfg_.big_c));
  out.ell = std::min(out.ell, U.empty() ? 0 : U.size() - 1);
  out.centers =
      out.ell == 0 ? U : RandLocalSearch(space_, p0_, U, out.ell, cfg_.solver, ls_rng_, &columns);
  return out;
}

void Engine::OpenEpoch() {
  p0_ = points_;
  seen_ = 0;
  ++metrics_.epochs;
  const Removal removal = RemoveCenters();
  ell_ = removal.ell;
  metrics_.ell = ell_;
  SetSolution(removal.centers);
  epoch_start_cost_ = Cost(space_, solution_, p0_);
}

void Engine::CloseEpoch(RecourseReport& report) {
  report.epoch_boundary = true;
  const PointSet& p1 = points_;
  if (p1.size() <= cfg_.k) {
    EnterBootstrap();
    return;
  }
  const CenterSet U = u_init_.Centers();

  // Step 4: develop, add the epoch's insertions, prune back to k.
  CenterSet developed = U;
  std::size_t outside = 0;
  for (const auto& p : p0_) outside += ContainsId(U, p.id) ? 0 : 1;
  const double wanted =
      std::ceil(cfg_.develop_slack_multiplier * static_cast<double>(ell_ + 1));
  const std::size_t s = static_cast<std::size_t>(std::min(wanted, static_cast<double>(outside)));
  if (s > 0) {
    const DevelopResult dev = DevelopCenters(space_, p0_, U, s, cfg_.delta, cfg_.solver,
                                             develop_rng_, cfg_.develop);
    developed = dev.centers;
    metrics_.star_forced += dev.star_forced ? 1 : 0;
    metrics_.star_weight_capped += dev.weight_capped ? 1 : 0;
  }
  std::vector<PointId> v = developed;
  for (const auto& p : Difference(p1, p0_)) v.push_back(p.id);
  const CenterSet V = Normalize(std::move(v));
  const CenterSet W =
      V.size() > cfg_.k ? RandLocalSearch(space_, p1, V, V.size() - cfg_.k, cfg_.solver, ls_rng_)
                        : V;

  std::size_t diff = 0;
  for (PointId w : W) diff += ContainsId(U, w) ? 0 : 1;
  for (PointId u : U) diff += ContainsId(W, u) ? 0 : 1;
  report.epoch_diff = static_cast<std::int64_t>(diff);
  metrics_.max_epoch_diff = std::max(metrics_.max_epoch_diff, report.epoch_diff);
  const double diff_bound =
      (2.0 * cfg_.develop_slack_multiplier + 2.0) * static_cast<double>(ell_ + 1);
  if (static_cast<double>(diff) > diff_bound) ++metrics_.epoch_diff_violations;

  RobustifyResult robust =
      Robustify(space_, p0_, p1, W, u_init_, cfg_.delta, cfg_.solver, one_median_rng_);
  report.robustify += robust.stats;
  u_init_ = std::move(robust.solution);
  OpenEpoch();
}

RecourseReport Engine::ApplyUpdate(const UpdateEvent& ev) {
  if (ev.op == UpdateEvent::Op::kInsert) {
    if (!space_.Contains(ev.id)) Fail(ErrorCode::kUnknownId, "unknown point " + IdString(ev.id));
    if (!(ev.weight > 0.0) || !std::isfinite(ev.weight)) {
      Fail(ErrorCode::kInvalidArgument, "weight must be positive");
    }
    if (points_.Contains(ev.id)) Fail(ErrorCode::kDuplicateId, "point " + IdString(ev.id) + " already present");
  } else if (!points_.Contains(ev.id)) {
    Fail(ErrorCode::kUnknownId, "point " + IdString(ev.id) + " not present");
  }

  RecourseReport report;
  const CenterSet before = solution_;
  const bool insert = ev.op == UpdateEvent::Op::kInsert;

  if (!bootstrap_) {
    for (const auto& [c, rec] : u_init_.records()) {
      if (Contaminates(space_, ev.id, rec)) ++report.contaminated;
    }
    metrics_.max_contaminated = std::max(metrics_.max_contaminated, report.contaminated);
  }

  if (insert) {
    points_.Insert(ev.id, ev.weight);
    index_.AddPoint(ev.id);
  } else {
    points_.Erase(ev.id);
  }

  if (bootstrap_) {
    if (points_.size() <= cfg_.k) {
      SetSolution(points_.Ids());
    } else {
      const std::vector<PointId> ids = points_.Ids();
      const CenterSet start = StaticKMedian(space_, points_, cfg_.k, ids, cfg_.solver, static_rng_);
      RobustifyResult robust = Robustify(space_, points_, points_, start, RobustSolution(),
                                         cfg_.delta, cfg_.solver, one_median_rng_);
      report.robustify += robust.stats;
      u_init_ = std::move(robust.solution);
      bootstrap_ = false;
      report.epoch_boundary = true;
      OpenEpoch();
    }
  } else {
    ++seen_;
    if (insert && !ContainsId(solution_, ev.id)) {
      CenterSet next = solution_;
      next.push_back(ev.id);
      SetSolution(std::move(next));
    }
    if (seen_ == ell_ + 1) CloseEpoch(report);
  }

  std::set_difference(solution_.begin(), solution_.end(), before.begin(), before.end(),
                      std::back_inserter(report.added));
  std::set_difference(before.begin(), before.end(), solution_.begin(), solution_.end(),
                      std::back_inserter(report.removed));
  index_.ApplyCenterDiff(report.added, report.removed);
  if (!insert) index_.RemovePoint(ev.id);

  report.makerobust_calls = report.robustify.calls();
  metrics_.robustify += report.robustify;
  metrics_.total_added += static_cast<std::int64_t>(report.added.size());
  metrics_.total_removed += static_cast<std::int64_t>(report.removed.size());
  metrics_.bootstrap = bootstrap_;
  ++metrics_.updates;
  return report;
}

}  // namespace dynkmed
