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

// Update streams: a JSON header line followed by one JSON event per line.
//
//   {"backing":"coords","norm":2,"dim":2,"delta":100,...}
//   {"op":"i","id":7,"w":1.0,"x":[3,8]}
//   {"op":"d","id":7}
//
// Matrix-backed streams name the matrix file in the header ("matrix") and
// carry no coordinates.

#ifndef DYNKMED_STREAM_HPP_
#define DYNKMED_STREAM_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dynkmed/engine.hpp"
#include "dynkmed/metric.hpp"

namespace dynkmed {

struct StreamHeader {
  std::string backing = "coords";  // "coords" or "matrix"
  double norm = 2.0;
  std::size_t dim = 2;
  double delta = 100.0;
  std::string matrix;  // matrix file, relative to the stream file
  std::string kind;    // generator that produced the stream, informational
  std::uint64_t seed = 0;
  std::size_t n_max = 0;
};

struct StreamEvent {
  UpdateEvent::Op op = UpdateEvent::Op::kInsert;
  std::uint32_t id = 0;
  double weight = 1.0;
  std::vector<double> x;
};

struct Stream {
  StreamHeader header;
  std::vector<StreamEvent> events;
};

// Parse errors carry kParse and the 1-based line number.
Stream ParseStream(std::istream& in);
Stream ReadStreamFile(const std::string& path);
void WriteStream(std::ostream& out, const Stream& stream);
void WriteStreamFile(const std::string& path, const Stream& stream);

// Builds the ground space a stream runs against: every coordinate insert is
// registered up front; matrix streams load `matrix` relative to `base_dir`.
std::unique_ptr<MetricSpace> BuildSpace(const Stream& stream, const std::string& base_dir = ".");

enum class StreamKind { kUniformBox, kTwoClusterDrift, kSlidingWindow, kAdversarialChurn };

StreamKind ParseStreamKind(const std::string& name);
std::string StreamKindName(StreamKind kind);

struct GenOptions {
  double delta = 100.0;
  std::size_t dim = 2;
  double norm = 2.0;
  // Ground locations available to the stream; 0 picks 2 * n_max.
  std::size_t pool = 0;
  // Insert weights are drawn uniformly from {1, ..., max_weight}.
  int max_weight = 1;
};

// Deterministic given (kind, n_max, T, seed, options). Points live on the
// integer grid of a box small enough that every distance lies in [1, delta].
// The live set never exceeds n_max.
Stream GenerateStream(StreamKind kind, std::size_t n_max, std::size_t T, std::uint64_t seed,
                      const GenOptions& opts = {});

}  // namespace dynkmed

#endif  // DYNKMED_STREAM_HPP_
