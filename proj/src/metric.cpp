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

#include "dynkmed/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dynkmed/random.hpp"

namespace dynkmed {

namespace {

constexpr double kRangeTolerance = 1e-9;

bool LessById(const WeightedPoint& a, const WeightedPoint& b) { return a.id < b.id; }

}  // namespace

MetricSpace MetricSpace::FromMatrix(std::vector<std::vector<double>> rows, double delta) {
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      Fail(ErrorCode::kMetricViolation,
           "matrix row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
               " entries, expected " + std::to_string(n));
    }
  }
  double max_entry = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0.0) {
      Fail(ErrorCode::kMetricViolation, "nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = rows[i][j];
      if (!(d == rows[j][i])) {
        Fail(ErrorCode::kMetricViolation,
             "asymmetric entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (!(d >= 1.0)) {
        Fail(ErrorCode::kMetricViolation, "distance below 1 between " + std::to_string(i) +
                                              " and " + std::to_string(j));
      }
      max_entry = std::max(max_entry, d);
    }
  }
  if (delta <= 0.0) delta = max_entry;
  if (max_entry > delta * (1.0 + kRangeTolerance)) {
    Fail(ErrorCode::kMetricViolation, "distance exceeds delta");
  }

  MetricSpace space;
  space.backing_ = Backing::kMatrix;
  space.delta_ = delta;
  space.count_ = n;
  space.stride_ = n;
  space.matrix_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(rows[i].begin(), rows[i].end(), space.matrix_.begin() + i * n);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double ab = space.matrix_[a * n + b];
      for (std::size_t c = 0; c < n; ++c) {
        const double ac = space.matrix_[a * n + c];
        const double bc = space.matrix_[b * n + c];
        if (ac > (ab + bc) * (1.0 + kRangeTolerance)) {
          Fail(ErrorCode::kMetricViolation, "triangle inequality violated on (" +
                                                std::to_string(a) + "," + std::to_string(b) +
                                                "," + std::to_string(c) + ")");
        }
      }
    }
  }
  return space;
}

MetricSpace MetricSpace::FromCoordinates(std::size_t dim, double norm_p, double delta) {
  if (dim == 0) Fail(ErrorCode::kInvalidArgument, "coordinate dimension must be positive");
  if (!(norm_p >= 1.0)) Fail(ErrorCode::kInvalidArgument, "norm must be >= 1");
  if (!(delta >= 1.0)) Fail(ErrorCode::kInvalidArgument, "delta must be >= 1");
  MetricSpace space;
  space.backing_ = Backing::kCoordinates;
  space.dim_ = dim;
  space.norm_p_ = norm_p;
  space.delta_ = delta;
  return space;
}

void MetricSpace::AddPoint(PointId id, std::span<const double> coords) {
  if (backing_ != Backing::kCoordinates) {
    Fail(ErrorCode::kInvalidArgument, "cannot add points to a matrix-backed space");
  }
  if (id == kNoPoint) Fail(ErrorCode::kInvalidArgument, "reserved point id");
  if (coords.size() != dim_) {
    Fail(ErrorCode::kInvalidArgument, "point " + IdString(id) + " has " +
                                          std::to_string(coords.size()) + " coordinates, expected " +
                                          std::to_string(dim_));
  }
  const std::size_t slot = Raw(id);
  if (slot < present_.size() && present_[slot]) {
    if (!std::equal(coords.begin(), coords.end(), coords_.begin() + slot * dim_)) {
      Fail(ErrorCode::kDuplicateId, "point " + IdString(id) + " re-added at a different location");
    }
    return;
  }
  std::vector<double> key(coords.begin(), coords.end());
  if (auto it = locations_.find(key); it != locations_.end()) {
    Fail(ErrorCode::kMetricViolation,
         "point " + IdString(id) + " duplicates the location of point " + IdString(it->second));
  }
  locations_.emplace(std::move(key), id);
  if (slot >= present_.size()) {
    present_.resize(slot + 1, 0);
    coords_.resize((slot + 1) * dim_, 0.0);
  }
  std::copy(coords.begin(), coords.end(), coords_.begin() + slot * dim_);
  present_[slot] = 1;
  ++count_;
}

void MetricSpace::Rescale(double factor) {
  if (!(factor > 0.0)) Fail(ErrorCode::kInvalidArgument, "rescale factor must be positive");
  if (backing_ == Backing::kMatrix) {
    for (double& d : matrix_) d *= factor;
  } else {
    for (double& c : coords_) c *= factor;
    std::map<std::vector<double>, PointId> scaled;
    for (auto& [key, id] : locations_) {
      std::vector<double> k2 = key;
      for (double& c : k2) c *= factor;
      scaled.emplace(std::move(k2), id);
    }
    locations_ = std::move(scaled);
  }
}

void MetricSpace::CheckId(PointId p) const {
  if (!Contains(p)) Fail(ErrorCode::kUnknownId, "unknown point id " + IdString(p));
}

bool MetricSpace::Contains(PointId p) const {
  const std::size_t slot = Raw(p);
  if (backing_ == Backing::kMatrix) return slot < count_;
  return slot < present_.size() && present_[slot];
}

std::vector<PointId> MetricSpace::GroundIds() const {
  std::vector<PointId> ids;
  ids.reserve(count_);
  if (backing_ == Backing::kMatrix) {
    for (std::size_t i = 0; i < count_; ++i) ids.push_back(MakeId(static_cast<std::uint32_t>(i)));
  } else {
    for (std::size_t i = 0; i < present_.size(); ++i) {
      if (present_[i]) ids.push_back(MakeId(static_cast<std::uint32_t>(i)));
    }
  }
  return ids;
}

std::span<const double> MetricSpace::Coordinates(PointId id) const {
  if (backing_ != Backing::kCoordinates) {
    Fail(ErrorCode::kInvalidArgument, "matrix-backed space has no coordinates");
  }
  CheckId(id);
  return {coords_.data() + Raw(id) * dim_, dim_};
}

double MetricSpace::Distance(PointId p, PointId q) const {
  CheckId(p);
  CheckId(q);
  if (p == q) return 0.0;
  if (backing_ == Backing::kMatrix) return matrix_[Raw(p) * stride_ + Raw(q)];
  const double* a = coords_.data() + Raw(p) * dim_;
  const double* b = coords_.data() + Raw(q) * dim_;
  if (norm_p_ == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double t = a[i] - b[i];
      s += t * t;
    }
    return std::sqrt(s);
  }
  if (norm_p_ == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += std::abs(a[i] - b[i]);
    return s;
  }
  if (std::isinf(norm_p_)) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += std::pow(std::abs(a[i] - b[i]), norm_p_);
  return std::pow(s, 1.0 / norm_p_);
}

MetricSpace LoadMatrixFile(const std::string& path, double delta) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open matrix file " + path);
  long long n = -1;
  if (!(in >> n) || n < 0) Fail(ErrorCode::kParse, path + ": expected point count on line 1");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : rows) {
    for (double& d : row) {
      if (!(in >> d)) Fail(ErrorCode::kParse, path + ": truncated distance matrix");
    }
  }
  return MetricSpace::FromMatrix(std::move(rows), delta);
}

std::pair<MetricSpace, PointSet> LoadCoordinateFile(const std::string& path, double norm_p,
                                                    double delta) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open coordinate file " + path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<WeightedPoint, std::vector<double>>> parsed;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    long long id = -1;
    double w = 0.0;
    if (!(fields >> id >> w) || id < 0) {
      Fail(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": expected \"id w x...\"");
    }
    std::vector<double> x;
    for (double v; fields >> v;) x.push_back(v);
    if (x.empty() || (dim != 0 && x.size() != dim)) {
      Fail(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": bad coordinate count");
    }
    dim = x.size();
    parsed.push_back({{MakeId(static_cast<std::uint32_t>(id)), w}, std::move(x)});
  }
  if (parsed.empty()) Fail(ErrorCode::kParse, path + ": no points");
  MetricSpace space = MetricSpace::FromCoordinates(dim, norm_p, delta);
  PointSet points;
  for (const auto& [wp, x] : parsed) {
    space.AddPoint(wp.id, x);
    points.Insert(wp.id, wp.weight);
  }
  // Rescale so the smallest sampled pairwise distance is at least 1.
  const std::vector<PointId> ids = space.GroundIds();
  double min_d = kInfinity;
  Rng rng = MakeRng(0x5eed, "load-rescale");
  const std::size_t n = ids.size();
  if (n * n / 2 <= 2'000'000) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) min_d = std::min(min_d, space.Distance(ids[i], ids[j]));
    }
  } else {
    for (int s = 0; s < 1'000'000; ++s) {
      const std::size_t i = UniformIndex(rng, n);
      const std::size_t j = UniformIndex(rng, n);
      if (i != j) min_d = std::min(min_d, space.Distance(ids[i], ids[j]));
    }
  }
  if (min_d == 0.0) Fail(ErrorCode::kMetricViolation, path + ": duplicate locations");
  if (min_d < 1.0 && std::isfinite(min_d)) space.Rescale(1.0 / min_d);
  return {std::move(space), std::move(points)};
}

PointSet::PointSet(std::vector<WeightedPoint> points) {
  std::sort(points.begin(), points.end(), LessById);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].weight > 0.0)) {
      Fail(ErrorCode::kInvalidArgument, "nonpositive weight for point " + IdString(points[i].id));
    }
    if (i > 0 && points[i].id == points[i - 1].id) {
      Fail(ErrorCode::kDuplicateId, "duplicate point " + IdString(points[i].id));
    }
  }
  points_ = std::move(points);
}

void PointSet::Insert(PointId id, double weight) {
  if (!(weight > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "nonpositive weight for point " + IdString(id));
  }
  auto it = std::lower_bound(points_.begin(), points_.end(), WeightedPoint{id, 0.0}, LessById);
  if (it != points_.end() && it->id == id) {
    Fail(ErrorCode::kDuplicateId, "point " + IdString(id) + " is already present");
  }
  points_.insert(it, WeightedPoint{id, weight});
}

void PointSet::Erase(PointId id) {
  auto it = std::lower_bound(points_.begin(), points_.end(), WeightedPoint{id, 0.0}, LessById);
  if (it == points_.end() || it->id != id) {
    Fail(ErrorCode::kUnknownId, "point " + IdString(id) + " is not present");
  }
  points_.erase(it);
}

bool PointSet::Contains(PointId id) const { return WeightOf(id).has_value(); }

std::optional<double> PointSet::WeightOf(PointId id) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), WeightedPoint{id, 0.0}, LessById);
  if (it == points_.end() || it->id != id) return std::nullopt;
  return it->weight;
}

double PointSet::TotalWeight() const {
  double total = 0.0;
  for (const auto& p : points_) total += p.weight;
  return total;
}

double PointSet::MaxWeight() const {
  double w = 0.0;
  for (const auto& p : points_) w = std::max(w, p.weight);
  return w;
}

std::vector<PointId> PointSet::Ids() const {
  std::vector<PointId> ids;
  ids.reserve(points_.size());
  for (const auto& p : points_) ids.push_back(p.id);
  return ids;
}

PointSet Difference(const PointSet& a, const PointSet& b) {
  std::vector<WeightedPoint> out;
  for (const auto& p : a) {
    const auto w = b.WeightOf(p.id);
    if (!w || *w != p.weight) out.push_back(p);
  }
  return PointSet(std::move(out));
}

std::vector<PointId> SymmetricDifferenceIds(const PointSet& a, const PointSet& b) {
  std::vector<PointId> ids;
  for (const auto& p : Difference(a, b)) ids.push_back(p.id);
  for (const auto& p : Difference(b, a)) ids.push_back(p.id);
  return Normalize(std::move(ids));
}

CenterSet Normalize(std::vector<PointId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool ContainsId(const CenterSet& sorted, PointId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

double Distance(const DistanceOracle& space, PointId p, PointId q) { return space.Distance(p, q); }

double DistanceToSet(const DistanceOracle& space, PointId p, std::span<const PointId> centers) {
  double best = kInfinity;
  for (PointId c : centers) best = std::min(best, space.Distance(p, c));
  return best;
}

double Cost(const DistanceOracle& space, std::span<const PointId> centers, const PointSet& points) {
  if (points.empty()) return 0.0;
  if (centers.empty()) Fail(ErrorCode::kInvalidArgument, "cost of an empty center set");
  double total = 0.0;
  for (const auto& p : points) total += p.weight * DistanceToSet(space, p.id, centers);
  return total;
}

double AvCost(const DistanceOracle& space, std::span<const PointId> centers, const PointSet& subset) {
  const double w = subset.TotalWeight();
  if (!(w > 0.0)) Fail(ErrorCode::kInvalidArgument, "average cost over zero total weight");
  return Cost(space, centers, subset) / w;
}

PointSet Ball(const DistanceOracle& space, const PointSet& points, PointId center, double radius) {
  if (!space.Contains(center)) Fail(ErrorCode::kUnknownId, "unknown ball center " + IdString(center));
  std::vector<WeightedPoint> inside;
  for (const auto& p : points) {
    if (space.Distance(center, p.id) <= radius) inside.push_back(p);
  }
  return PointSet(std::move(inside));
}

NearestResult Nearest(const DistanceOracle& space, PointId p, std::span<const PointId> targets) {
  if (targets.empty()) Fail(ErrorCode::kInvalidArgument, "nearest over an empty target set");
  NearestResult best{kNoPoint, kInfinity};
  for (PointId t : targets) {
    const double d = space.Distance(p, t);
    if (d < best.distance || (d == best.distance && t < best.id)) best = {t, d};
  }
  return best;
}

bool SatisfiesTriangleInequality(const DistanceOracle& space, std::span<const PointId> ids,
                                 double rel_tol) {
  for (PointId a : ids) {
    for (PointId b : ids) {
      const double ab = space.Distance(a, b);
      for (PointId c : ids) {
        if (space.Distance(a, c) > (ab + space.Distance(b, c)) * (1.0 + rel_tol)) return false;
      }
    }
  }
  return true;
}

DistanceColumns::DistanceColumns(const DistanceOracle& space,
                                 std::span<const WeightedPoint> points)
    : space_(space) {
  ids_.reserve(points.size());
  for (const auto& p : points) ids_.push_back(p.id);
}

const double* DistanceColumns::Column(PointId c) {
  auto [it, fresh] = columns_.try_emplace(Raw(c));
  if (fresh) {
    it->second.resize(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) it->second[i] = space_.Distance(c, ids_[i]);
  }
  return it->second.data();
}

}  // namespace dynkmed
