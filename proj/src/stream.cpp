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

#include "dynkmed/stream.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dynkmed {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  Fail(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

double NormFromJson(const Json& v, std::size_t line) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfinity;
    ParseFail(line, "norm must be a number >= 1 or \"inf\"");
  }
  if (!v.is_number()) ParseFail(line, "norm must be a number >= 1 or \"inf\"");
  return v.get<double>();
}

StreamHeader ParseHeader(const Json& j, std::size_t line) {
  if (!j.is_object()) ParseFail(line, "header must be a JSON object");
  StreamHeader h;
  for (const auto& [key, v] : j.items()) {
    if (key == "backing") {
      h.backing = v.get<std::string>();
    } else if (key == "norm") {
      h.norm = NormFromJson(v, line);
    } else if (key == "dim") {
      h.dim = v.get<std::size_t>();
    } else if (key == "delta") {
      h.delta = v.get<double>();
    } else if (key == "matrix") {
      h.matrix = v.get<std::string>();
    } else if (key == "kind") {
      h.kind = v.get<std::string>();
    } else if (key == "seed") {
      h.seed = v.get<std::uint64_t>();
    } else if (key == "n_max") {
      h.n_max = v.get<std::size_t>();
    } else if (key != "T" && key != "format") {
      ParseFail(line, "unknown header field \"" + key + "\"");
    }
  }
  if (h.backing != "coords" && h.backing != "matrix") {
    ParseFail(line, "backing must be \"coords\" or \"matrix\"");
  }
  if (h.backing == "matrix" && h.matrix.empty()) ParseFail(line, "matrix backing needs \"matrix\"");
  if (!(h.delta >= 1.0)) ParseFail(line, "delta must be >= 1");
  return h;
}

StreamEvent ParseEvent(const Json& j, std::size_t line, const StreamHeader& h) {
  if (!j.is_object() || !j.contains("op") || !j.contains("id")) {
    ParseFail(line, "event needs \"op\" and \"id\"");
  }
  StreamEvent ev;
  const std::string op = j.at("op").get<std::string>();
  const auto id = j.at("id").get<std::int64_t>();
  if (id < 0 || id >= static_cast<std::int64_t>(Raw(kNoPoint))) ParseFail(line, "id out of range");
  ev.id = static_cast<std::uint32_t>(id);
  if (op == "i") {
    ev.op = UpdateEvent::Op::kInsert;
    ev.weight = j.value("w", 1.0);
    if (!(ev.weight > 0.0)) ParseFail(line, "insert weight must be positive");
    if (h.backing == "coords") {
      if (!j.contains("x")) ParseFail(line, "coordinate insert needs \"x\"");
      ev.x = j.at("x").get<std::vector<double>>();
      if (ev.x.size() != h.dim) ParseFail(line, "expected " + std::to_string(h.dim) + " coordinates");
    }
  } else if (op == "d") {
    ev.op = UpdateEvent::Op::kDelete;
  } else {
    ParseFail(line, "op must be \"i\" or \"d\"");
  }
  return ev;
}

}  // namespace

Stream ParseStream(std::istream& in) {
  Stream s;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      ParseFail(line, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        s.header = ParseHeader(j, line);
        have_header = true;
      } else {
        s.events.push_back(ParseEvent(j, line, s.header));
      }
    } catch (const Json::exception& e) {
      ParseFail(line, std::string("bad field: ") + e.what());
    }
  }
  if (!have_header) Fail(ErrorCode::kParse, "stream has no header line");
  return s;
}

Stream ReadStreamFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open stream " + path);
  try {
    return ParseStream(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) Fail(ErrorCode::kParse, path + ": " + e.what());
    throw;
  }
}

void WriteStream(std::ostream& out, const Stream& stream) {
  const StreamHeader& h = stream.header;
  Json head;
  head["format"] = "dynkmed-stream";
  head["backing"] = h.backing;
  if (h.backing == "coords") {
    if (std::isinf(h.norm)) {
      head["norm"] = "inf";
    } else {
      head["norm"] = h.norm;
    }
    head["dim"] = h.dim;
  } else {
    head["matrix"] = h.matrix;
  }
  head["delta"] = h.delta;
  if (!h.kind.empty()) head["kind"] = h.kind;
  head["seed"] = h.seed;
  head["n_max"] = h.n_max;
  head["T"] = stream.events.size();
  out << head.dump() << '\n';
  for (const auto& ev : stream.events) {
    Json j;
    j["op"] = ev.op == UpdateEvent::Op::kInsert ? "i" : "d";
    j["id"] = ev.id;
    if (ev.op == UpdateEvent::Op::kInsert) {
      j["w"] = ev.weight;
      if (!ev.x.empty()) j["x"] = ev.x;
    }
    out << j.dump() << '\n';
  }
}

void WriteStreamFile(const std::string& path, const Stream& stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  WriteStream(out, stream);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

std::unique_ptr<MetricSpace> BuildSpace(const Stream& stream, const std::string& base_dir) {
  const StreamHeader& h = stream.header;
  if (h.backing == "matrix") {
    const std::filesystem::path path = std::filesystem::path(base_dir) / h.matrix;
    return std::make_unique<MetricSpace>(LoadMatrixFile(path.string(), h.delta));
  }
  auto space = std::make_unique<MetricSpace>(MetricSpace::FromCoordinates(h.dim, h.norm, h.delta));
  std::size_t line = 1;
  for (const auto& ev : stream.events) {
    ++line;
    if (ev.op != UpdateEvent::Op::kInsert) continue;
    try {
      space->AddPoint(MakeId(ev.id), ev.x);
    } catch (const Error& e) {
      Fail(e.code(), "line " + std::to_string(line) + ": " + e.what());
    }
  }
  return space;
}

StreamKind ParseStreamKind(const std::string& name) {
  if (name == "uniform-box") return StreamKind::kUniformBox;
  if (name == "two-cluster-drift") return StreamKind::kTwoClusterDrift;
  if (name == "sliding-window") return StreamKind::kSlidingWindow;
  if (name == "adversarial-churn") return StreamKind::kAdversarialChurn;
  Fail(ErrorCode::kInvalidArgument, "unknown stream kind \"" + name + "\"");
}

std::string StreamKindName(StreamKind kind) {
  switch (kind) {
    case StreamKind::kUniformBox:
      return "uniform-box";
    case StreamKind::kTwoClusterDrift:
      return "two-cluster-drift";
    case StreamKind::kSlidingWindow:
      return "sliding-window";
    case StreamKind::kAdversarialChurn:
      return "adversarial-churn";
  }
  return "unknown";
}

namespace {

using Coord = std::vector<double>;

// Box side so that the p-norm diameter of [0, side]^dim stays within delta.
long long BoxSide(const GenOptions& o) {
  const double spread = std::isinf(o.norm) ? 1.0 : std::pow(static_cast<double>(o.dim), 1.0 / o.norm);
  return static_cast<long long>(std::floor(o.delta / spread + 1e-9));
}

class PoolBuilder {
 public:
  PoolBuilder(const GenOptions& o, Rng& rng) : o_(o), rng_(rng), side_(BoxSide(o)) {
    if (side_ < 1) Fail(ErrorCode::kInvalidArgument, "delta too small for a nontrivial grid");
  }

  long long side() const { return side_; }

  // Adds the grid point if new; returns whether it was added.
  bool Offer(Coord c) {
    for (double& v : c) v = std::clamp(std::round(v), 0.0, static_cast<double>(side_));
    if (!seen_.insert(c).second) return false;
    pool_.push_back(std::move(c));
    return true;
  }

  void FillUniform(std::size_t count) {
    CheckCapacity(count);
    while (pool_.size() < count) {
      Coord c(o_.dim);
      for (double& v : c) v = static_cast<double>(UniformIndex(rng_, static_cast<std::uint64_t>(side_) + 1));
      Offer(std::move(c));
    }
  }

  void CheckCapacity(std::size_t count) const {
    const double cells = std::pow(static_cast<double>(side_ + 1), static_cast<double>(o_.dim));
    if (static_cast<double>(count) > cells / 2) {
      Fail(ErrorCode::kInvalidArgument, "pool of " + std::to_string(count) +
                                            " points does not fit the grid for this delta");
    }
  }

  std::vector<Coord>& pool() { return pool_; }

 private:
  const GenOptions& o_;
  Rng& rng_;
  long long side_;
  std::set<Coord> seen_;
  std::vector<Coord> pool_;
};

double Gaussian(Rng& rng) {
  // Box-Muller on the platform-independent uniform.
  const double u1 = 1.0 - UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

class LiveSet {
 public:
  explicit LiveSet(std::size_t pool) : live_(pool, 0) {}
  bool Has(std::size_t i) const { return live_[i] != 0; }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  void Insert(std::size_t i) {
    live_[i] = 1;
    order_.push_back(i);
  }
  void Erase(std::size_t i) {
    live_[i] = 0;
    order_.erase(std::find(order_.begin(), order_.end(), i));
  }
  std::size_t Oldest() const { return order_.front(); }
  std::size_t Random(Rng& rng) const { return order_[UniformIndex(rng, order_.size())]; }
  std::vector<std::size_t> Free() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      if (!live_[i]) out.push_back(i);
    }
    return out;
  }
  const std::deque<std::size_t>& order() const { return order_; }

 private:
  std::vector<char> live_;
  std::deque<std::size_t> order_;
};

double SqDist(const Coord& a, const Coord& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

Stream GenerateStream(StreamKind kind, std::size_t n_max, std::size_t T, std::uint64_t seed,
                      const GenOptions& opts) {
  if (T == 0) Fail(ErrorCode::kInvalidArgument, "T must be >= 1");
  if (n_max == 0) Fail(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  if (opts.dim == 0 || !(opts.norm >= 1.0) || !(opts.delta >= 1.0) || opts.max_weight < 1) {
    Fail(ErrorCode::kInvalidArgument, "invalid generator options");
  }
  Rng rng = MakeRng(seed, "generator-" + StreamKindName(kind));
  const std::size_t pool_size = opts.pool == 0 ? 2 * n_max : opts.pool;
  if (pool_size < n_max) Fail(ErrorCode::kInvalidArgument, "pool smaller than n_max");

  PoolBuilder builder(opts, rng);
  std::vector<double> phase;  // drift streams: position along the trajectory
  if (kind == StreamKind::kTwoClusterDrift) {
    builder.CheckCapacity(pool_size);
    const double side = static_cast<double>(builder.side());
    const double sigma = std::max(1.0, side / 40.0);
    std::size_t attempts = 0;
    while (builder.pool().size() < pool_size) {
      const std::size_t i = builder.pool().size();
      const double ph = static_cast<double>(i) / static_cast<double>(pool_size);
      const int cluster = static_cast<int>(i % 2);
      Coord c(opts.dim);
      for (std::size_t d = 0; d < opts.dim; ++d) {
        const double from = cluster == 0 ? 0.2 * side : 0.8 * side;
        const double to = cluster == 0 ? 0.45 * side : 0.55 * side;
        const double centre = d == 0 ? from + ph * (to - from) : (cluster == 0 ? 0.3 : 0.7) * side;
        c[d] = centre + sigma * (1.0 + static_cast<double>(attempts / pool_size)) * Gaussian(rng);
      }
      if (builder.Offer(std::move(c))) {
        phase.push_back(ph);
      } else {
        ++attempts;
      }
    }
  } else {
    builder.FillUniform(pool_size);
  }
  const std::vector<Coord>& pool = builder.pool();

  Stream s;
  s.header.backing = "coords";
  s.header.norm = opts.norm;
  s.header.dim = opts.dim;
  s.header.delta = opts.delta;
  s.header.kind = StreamKindName(kind);
  s.header.seed = seed;
  s.header.n_max = n_max;

  LiveSet live(pool.size());
  auto insert = [&](std::size_t i) {
    live.Insert(i);
    StreamEvent ev;
    ev.op = UpdateEvent::Op::kInsert;
    ev.id = static_cast<std::uint32_t>(i);
    ev.weight = static_cast<double>(1 + UniformIndex(rng, static_cast<std::uint64_t>(opts.max_weight)));
    ev.x = pool[i];
    s.events.push_back(std::move(ev));
  };
  auto erase = [&](std::size_t i) {
    live.Erase(i);
    StreamEvent ev;
    ev.op = UpdateEvent::Op::kDelete;
    ev.id = static_cast<std::uint32_t>(i);
    s.events.push_back(std::move(ev));
  };
  auto random_free = [&]() {
    const std::vector<std::size_t> free = live.Free();
    return free[UniformIndex(rng, free.size())];
  };

  const std::size_t warmup = (n_max + 1) / 2;
  std::size_t hot = 0;
  std::vector<std::size_t> churn;  // adversarial: points inserted near the hot spot
  for (std::size_t t = 0; t < T; ++t) {
    const bool full = live.size() >= n_max;
    switch (kind) {
      case StreamKind::kUniformBox: {
        const bool grow = t < warmup || UniformUnit(rng) < 0.6;
        if (!live.empty() && (full || !grow)) {
          erase(live.Random(rng));
        } else {
          insert(random_free());
        }
        break;
      }
      case StreamKind::kSlidingWindow: {
        // Fill the window, then alternate delete-oldest and insert.
        if (full) {
          erase(live.Oldest());
        } else {
          insert(random_free());
        }
        break;
      }
      case StreamKind::kTwoClusterDrift: {
        const double now = static_cast<double>(t) / static_cast<double>(T);
        const bool grow = t < warmup || UniformUnit(rng) < 0.6;
        if (!live.empty() && (full || !grow)) {
          // Retire the point furthest behind the drift.
          std::size_t victim = live.Oldest();
          for (std::size_t i : live.order()) {
            if (phase[i] < phase[victim]) victim = i;
          }
          erase(UniformUnit(rng) < 0.5 ? victim : live.Random(rng));
        } else {
          std::size_t best = random_free();
          double best_gap = kInfinity;
          for (int tries = 0; tries < 8; ++tries) {
            const std::size_t i = random_free();
            const double gap = std::abs(phase[i] - now);
            if (gap < best_gap) {
              best_gap = gap;
              best = i;
            }
          }
          insert(best);
        }
        break;
      }
      case StreamKind::kAdversarialChurn: {
        if (t < warmup || live.empty()) {
          insert(random_free());
          break;
        }
        const std::size_t cycle = (t - warmup) % 4;
        if (cycle == 0) {
          hot = live.Random(rng);
          churn.clear();
        }
        if ((cycle == 0 || cycle == 1) && !full) {
          std::size_t best = pool.size();
          for (std::size_t i = 0; i < pool.size(); ++i) {
            if (live.Has(i)) continue;
            if (best == pool.size() || SqDist(pool[i], pool[hot]) < SqDist(pool[best], pool[hot])) {
              best = i;
            }
          }
          churn.push_back(best);
          insert(best);
        } else if (!churn.empty() && live.Has(churn.front())) {
          const std::size_t victim = churn.front();
          churn.erase(churn.begin());
          erase(victim);
        } else {
          std::size_t victim = live.Oldest();
          for (std::size_t i : live.order()) {
            if (SqDist(pool[i], pool[hot]) < SqDist(pool[victim], pool[hot]) && i != hot) victim = i;
          }
          erase(victim);
        }
        break;
      }
    }
  }
  return s;
}

}  // namespace dynkmed
