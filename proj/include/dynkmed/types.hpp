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

#ifndef DYNKMED_TYPES_HPP_
#define DYNKMED_TYPES_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynkmed {

// Opaque handle of a point of the ground space. Ids are dense small
// integers; the ground space never reuses an id for a different location.
enum class PointId : std::uint32_t {};

inline constexpr std::uint32_t Raw(PointId id) { return static_cast<std::uint32_t>(id); }
inline constexpr PointId MakeId(std::uint32_t raw) { return static_cast<PointId>(raw); }

// Reserved id that never names a ground point (used by the contracted metric).
inline constexpr PointId kNoPoint = MakeId(std::numeric_limits<std::uint32_t>::max());

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct WeightedPoint {
  PointId id;
  double weight;

  friend bool operator==(const WeightedPoint&, const WeightedPoint&) = default;
};

using CenterSet = std::vector<PointId>;  // kept sorted and duplicate-free

enum class ErrorCode {
  kInvalidArgument = 1,
  kUnknownId,
  kDuplicateId,
  kMetricViolation,
  kBudgetExceeded,
  kIo,
  kParse,
  kAssertion,
  kInternal,
};

// The single exception type thrown by the library. The C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline std::string IdString(PointId id) { return std::to_string(Raw(id)); }

}  // namespace dynkmed

#endif  // DYNKMED_TYPES_HPP_
