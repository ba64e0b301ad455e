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

#include "dynkmed/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynkmed/oracles.hpp"

namespace dynkmed {

namespace {

// Slack on the cluster pruning test, absorbing rounding in the triangle
// inequality.
constexpr double kPruneSlack = 1e-9;

}  // namespace

AssignmentState::AssignmentState(const DistanceOracle& space, const PointSet& points,
                                 std::span<const PointId> centers, DistanceColumns* columns)
    : space_(space),
      points_(points.begin(), points.end()),
      own_columns_(columns == nullptr ? std::make_unique<DistanceColumns>(space, points_)
                                      : nullptr),
      columns_(columns == nullptr ? own_columns_.get() : columns),
      first_(points_.size(), kNone),
      second_(points_.size(), kNone),
      d1_(points_.size(), kInfinity),
      d2_(points_.size(), kInfinity),
      pos_(points_.size(), 0) {
  for (PointId c : Normalize({centers.begin(), centers.end()})) {
    slots_.push_back(c);
    slot_columns_.push_back(columns_->Column(c));
    slot_local_.push_back(LocalIndex(c));
    ++num_centers_;
  }
  for (std::size_t i = 0; i < points_.size(); ++i) Rescan(i);
  Rebuild();
}

void AssignmentState::Rescan(std::size_t i) {
  first_[i] = second_[i] = kNone;
  d1_[i] = d2_[i] = kInfinity;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const PointId c = slots_[s];
    if (c == kNoPoint) continue;
    const double d = slot_columns_[s][i];
    if (d < d1_[i] || (d == d1_[i] && c < slots_[first_[i]])) {
      second_[i] = first_[i];
      d2_[i] = d1_[i];
      first_[i] = s;
      d1_[i] = d;
    } else if (d < d2_[i] || second_[i] == kNone) {
      second_[i] = s;
      d2_[i] = d;
    }
  }
}

std::size_t AssignmentState::LocalIndex(PointId c) {
  auto [it, fresh] = local_.try_emplace(Raw(c), local_.size());
  if (fresh) {
    local_ids_.push_back(c);
    for (auto& row : center_dist_) row.push_back(std::numeric_limits<double>::quiet_NaN());
    center_dist_.emplace_back(local_.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return it->second;
}

double AssignmentState::CenterDistance(std::size_t a, std::size_t b) {
  double& d = center_dist_[a][b];
  if (std::isnan(d)) {
    d = space_.Distance(local_ids_[a], local_ids_[b]);
    center_dist_[b][a] = d;
  }
  return d;
}

void AssignmentState::Rebuild() {
  members_.assign(slots_.size(), {});
  bound_.assign(slots_.size(), 0.0);
  loss_.assign(slots_.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    total += points_[i].weight * d1_[i];
    if (first_[i] == kNone) continue;
    Attach(i, first_[i]);
    bound_[first_[i]] = std::max(bound_[first_[i]], d1_[i] + d2_[i]);
    loss_[first_[i]] += points_[i].weight * (d2_[i] - d1_[i]);
  }
  total_cost_ = points_.empty() ? 0.0 : total;
}

void AssignmentState::Attach(std::size_t i, std::size_t slot) {
  pos_[i] = members_[slot].size();
  members_[slot].push_back(i);
}

void AssignmentState::Detach(std::size_t i) {
  std::vector<std::size_t>& list = members_[first_[i]];
  const std::size_t last = list.back();
  list[pos_[i]] = last;
  pos_[last] = pos_[i];
  list.pop_back();
}

void AssignmentState::AddCenter(PointId v) {
  if (std::find(slots_.begin(), slots_.end(), v) != slots_.end()) {
    Fail(ErrorCode::kDuplicateId, "center " + IdString(v) + " already present");
  }
  const std::size_t slot = static_cast<std::size_t>(
      std::find(slots_.begin(), slots_.end(), kNoPoint) - slots_.begin());
  const double* column = columns_->Column(v);
  const std::size_t local = LocalIndex(v);
  last_appended_ = slot == slots_.size();
  last_added_ = v;
  last_slot_ = slot;
  last_total_ = total_cost_;
  last_loss_ = loss_;
  last_bound_ = bound_;
  journal_.clear();
  if (last_appended_) {
    slots_.push_back(v);
    slot_columns_.push_back(column);
    slot_local_.push_back(local);
    members_.emplace_back();
    bound_.push_back(0.0);
    loss_.push_back(0.0);
  } else {
    slots_[slot] = v;
    slot_columns_[slot] = column;
    slot_local_[slot] = local;
    members_[slot].clear();
    bound_[slot] = 0.0;
    loss_[slot] = 0.0;
  }
  const std::size_t before = num_centers_++;

  // With fewer than two centers second distances are infinite and the
  // pruning bound is useless: scan everything and rebuild.
  last_rebuilt_ = before < 2;
  if (last_rebuilt_) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      journal_.push_back({i, first_[i], second_[i], d1_[i], d2_[i]});
    }
    for (std::size_t i = 0; i < points_.size(); ++i) Rescan(i);
    Rebuild();
    return;
  }

  double total = total_cost_;
  for (std::size_t c = 0; c < slots_.size(); ++c) {
    if (c == slot || slots_[c] == kNoPoint || members_[c].empty()) continue;
    if (CenterDistance(local, slot_local_[c]) > bound_[c] * (1.0 + kPruneSlack) + kPruneSlack) {
      continue;
    }
    std::vector<std::size_t>& list = members_[c];
    double kept_bound = 0.0;
    // Backwards so that swap-removal only moves visited entries.
    for (std::size_t j = list.size(); j-- > 0;) {
      const std::size_t i = list[j];
      const double d = column[i];
      const double w = points_[i].weight;
      if (d < d1_[i] || (d == d1_[i] && v < slots_[c])) {
        journal_.push_back({i, first_[i], second_[i], d1_[i], d2_[i]});
        loss_[c] -= w * (d2_[i] - d1_[i]);
        total += w * (d - d1_[i]);
        Detach(i);
        second_[i] = c;
        d2_[i] = d1_[i];
        first_[i] = slot;
        d1_[i] = d;
        Attach(i, slot);
        loss_[slot] += w * (d2_[i] - d1_[i]);
        bound_[slot] = std::max(bound_[slot], d1_[i] + d2_[i]);
        continue;
      }
      if (d < d2_[i]) {
        journal_.push_back({i, first_[i], second_[i], d1_[i], d2_[i]});
        loss_[c] += w * (d - d2_[i]);
        second_[i] = slot;
        d2_[i] = d;
      }
      kept_bound = std::max(kept_bound, d1_[i] + d2_[i]);
    }
    bound_[c] = kept_bound;
  }
  total_cost_ = points_.empty() ? 0.0 : total;
}

void AssignmentState::RemoveCenter(PointId z) {
  auto it = std::find(slots_.begin(), slots_.end(), z);
  if (z == kNoPoint || it == slots_.end()) {
    Fail(ErrorCode::kUnknownId, "center " + IdString(z) + " not present");
  }
  const auto slot = static_cast<std::size_t>(it - slots_.begin());
  --num_centers_;
  if (z == last_added_ && slot == last_slot_) {
    last_added_ = kNoPoint;
    if (!last_rebuilt_) {
      for (std::size_t e = journal_.size(); e-- > 0;) {
        const Saved& old = journal_[e];
        if (first_[old.i] == slot) {
          Detach(old.i);
          Attach(old.i, old.first);
        }
      }
    }
    for (const Saved& old : journal_) {
      first_[old.i] = old.first;
      second_[old.i] = old.second;
      d1_[old.i] = old.d1;
      d2_[old.i] = old.d2;
    }
    if (last_appended_) {
      slots_.pop_back();
      slot_columns_.pop_back();
      slot_local_.pop_back();
      members_.pop_back();
    } else {
      *it = kNoPoint;
      members_[slot].clear();
    }
    if (last_rebuilt_) {
      Rebuild();
      return;
    }
    bound_.swap(last_bound_);
    loss_.swap(last_loss_);
    total_cost_ = last_total_;
    return;
  }
  last_added_ = kNoPoint;
  *it = kNoPoint;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (first_[i] == slot || second_[i] == slot) Rescan(i);
  }
  Rebuild();
}

CenterSet AssignmentState::Centers() const {
  std::vector<PointId> out;
  for (PointId c : slots_) {
    if (c != kNoPoint) out.push_back(c);
  }
  return Normalize(std::move(out));
}

std::vector<double> AssignmentState::RemovalLoss() const {
  std::vector<std::pair<PointId, double>> ordered;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (slots_[s] != kNoPoint) ordered.emplace_back(slots_[s], loss_[s]);
  }
  std::sort(ordered.begin(), ordered.end());
  std::vector<double> loss;
  loss.reserve(ordered.size());
  for (const auto& [id, l] : ordered) loss.push_back(l);
  return loss;
}

std::pair<PointId, double> AssignmentState::CheapestRemoval() const {
  PointId best = kNoPoint;
  double best_loss = kInfinity;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const PointId c = slots_[s];
    if (c == kNoPoint) continue;
    if (best == kNoPoint || loss_[s] < best_loss || (loss_[s] == best_loss && c < best)) {
      best = c;
      best_loss = loss_[s];
    }
  }
  if (best == kNoPoint) Fail(ErrorCode::kInvalidArgument, "no center to delete");
  return {best, best_loss};
}

double AssignmentState::RecomputeCost() const {
  return Cost(space_, Centers(), PointSet(points_));
}

Deletion BestDeletion(const AssignmentState& state) {
  if (state.num_centers() == 0) Fail(ErrorCode::kInvalidArgument, "no center to delete");
  if (state.num_centers() == 1 && state.num_points() > 0) {
    Fail(ErrorCode::kInvalidArgument, "cannot delete the last center of a nonempty input");
  }
  const auto [center, loss] = state.CheapestRemoval();
  return {center, state.total_cost() + loss};
}

CenterSet RandLocalSearch(const DistanceOracle& space, const PointSet& points,
                          std::span<const PointId> U, std::size_t s, const SolverConfig& cfg,
                          Rng& rng, DistanceColumns* columns) {
  const CenterSet all = Normalize({U.begin(), U.end()});
  if (all.empty() || s >= all.size()) {
    Fail(ErrorCode::kInvalidArgument, "local search needs 0 <= s <= |U| - 1 (s=" +
                                          std::to_string(s) + ", |U|=" +
                                          std::to_string(all.size()) + ")");
  }
  if (s == 0) return all;
  if (cfg.mode == SubroutineMode::kExact && !points.empty() &&
      Binomial(all.size(), all.size() - s) <= cfg.enumeration_budget) {
    return OptExact(space, points, all.size() - s, all, cfg.enumeration_budget).centers;
  }

  std::vector<PointId> outside(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s));
  const std::vector<PointId> inside(all.begin() + static_cast<std::ptrdiff_t>(s), all.end());
  if (points.empty()) return Normalize(inside);

  AssignmentState state(space, points, inside, columns);
  const std::size_t iterations = static_cast<std::size_t>(cfg.ls_iteration_multiplier) * s *
                                 static_cast<std::size_t>(CeilLog2(points.size() + 2));
  for (std::size_t it = 0; it < iterations; ++it) {
    const std::size_t pick = UniformIndex(rng, outside.size());
    const PointId v = outside[pick];
    state.AddCenter(v);
    const Deletion del = BestDeletion(state);
    state.RemoveCenter(del.center);
    outside[pick] = del.center;
  }
  return state.Centers();
}

}  // namespace dynkmed
