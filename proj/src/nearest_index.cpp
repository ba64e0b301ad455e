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

#include "dynkmed/nearest_index.hpp"

#include <algorithm>

namespace dynkmed {

NearestCenterIndex::Entry NearestCenterIndex::MakeEntry(PointId p) const {
  Entry e;
  for (PointId c : centers_) e.tree.emplace(space_.Distance(p, c), c);
  e.is_center = ContainsId(centers_, p);
  return e;
}

void NearestCenterIndex::Rebuild(const PointSet& points, std::span<const PointId> centers) {
  centers_ = Normalize({centers.begin(), centers.end()});
  entries_.clear();
  for (const auto& p : points) {
    Entry e = MakeEntry(p.id);
    e.in_points = true;
    entries_.emplace(Raw(p.id), std::move(e));
  }
  for (PointId c : centers_) {
    if (!entries_.count(Raw(c))) entries_.emplace(Raw(c), MakeEntry(c));
  }
}

void NearestCenterIndex::ApplyCenterDiff(std::span<const PointId> added,
                                         std::span<const PointId> removed) {
  const CenterSet add = Normalize({added.begin(), added.end()});
  const CenterSet rem = Normalize({removed.begin(), removed.end()});
  for (PointId c : add) {
    if (ContainsId(centers_, c)) Fail(ErrorCode::kInvalidArgument, IdString(c) + " already a center");
    if (ContainsId(rem, c)) Fail(ErrorCode::kInvalidArgument, IdString(c) + " added and removed");
  }
  for (PointId c : rem) {
    if (!ContainsId(centers_, c)) Fail(ErrorCode::kInvalidArgument, IdString(c) + " not a center");
  }
  if (add.empty() && rem.empty()) return;

  CenterSet next;
  std::set_difference(centers_.begin(), centers_.end(), rem.begin(), rem.end(),
                      std::back_inserter(next));
  next.insert(next.end(), add.begin(), add.end());
  centers_ = Normalize(std::move(next));

  for (auto& [raw, e] : entries_) {
    const PointId p = MakeId(raw);
    for (PointId c : rem) e.tree.erase({space_.Distance(p, c), c});
    for (PointId c : add) e.tree.emplace(space_.Distance(p, c), c);
  }
  for (PointId c : rem) {
    auto it = entries_.find(Raw(c));
    it->second.is_center = false;
    if (!it->second.in_points) entries_.erase(it);
  }
  for (PointId c : add) {
    auto it = entries_.find(Raw(c));
    if (it == entries_.end()) {
      entries_.emplace(Raw(c), MakeEntry(c));
    } else {
      it->second.is_center = true;
    }
  }
}

void NearestCenterIndex::AddPoint(PointId p) {
  auto it = entries_.find(Raw(p));
  if (it == entries_.end()) {
    Entry e = MakeEntry(p);
    e.in_points = true;
    entries_.emplace(Raw(p), std::move(e));
    return;
  }
  if (it->second.in_points) Fail(ErrorCode::kDuplicateId, IdString(p) + " already tracked");
  it->second.in_points = true;
}

void NearestCenterIndex::RemovePoint(PointId p) {
  auto it = entries_.find(Raw(p));
  if (it == entries_.end() || !it->second.in_points) {
    Fail(ErrorCode::kUnknownId, IdString(p) + " is not a tracked input point");
  }
  it->second.in_points = false;
  if (!it->second.is_center) entries_.erase(it);
}

NearestResult NearestCenterIndex::Nearest(PointId p) const {
  auto it = entries_.find(Raw(p));
  if (it == entries_.end()) Fail(ErrorCode::kUnknownId, IdString(p) + " is not tracked");
  if (it->second.tree.empty()) Fail(ErrorCode::kInvalidArgument, "no centers");
  const auto& [d, c] = *it->second.tree.begin();
  return {c, d};
}

std::vector<std::pair<double, PointId>> NearestCenterIndex::Tree(PointId p) const {
  auto it = entries_.find(Raw(p));
  if (it == entries_.end()) Fail(ErrorCode::kUnknownId, IdString(p) + " is not tracked");
  return {it->second.tree.begin(), it->second.tree.end()};
}

}  // namespace dynkmed
