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

// Run orchestration, oracle-checked replays and reporting on top of the
// engine. Everything the CLI does goes through here.

#ifndef DYNKMED_HARNESS_HPP_
#define DYNKMED_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dynkmed/engine.hpp"
#include "dynkmed/stream.hpp"

namespace dynkmed {

struct RunOptions {
  // opt_est is refreshed by a static solve every monitor_interval updates.
  std::size_t monitor_interval = 25;
  // When false the ns column is written as 0, making the CSV a pure
  // function of (stream, config).
  bool timing = true;
};

// Parses a JSON config object. Recognised keys: "mode" ("practical" or
// "paper"), "exact", "beta", "seed", "gamma", "big_c", "removal_threshold",
// "stability_eta", "develop_slack_multiplier", "sample_count_multiplier",
// "ls_iteration_multiplier", "swap_candidate_multiplier",
// "swap_improvement_factor", "enumeration_budget", "max_star_weight",
// "monitor_interval", "timing". Explicit constants override the mode preset.
// Unknown keys fail with kParse.
void ApplyConfigJson(const std::string& json_text, std::size_t k, double delta,
                     EngineConfig& cfg, RunOptions& opts);
void ApplyConfigFile(const std::string& path, std::size_t k, double delta, EngineConfig& cfg,
                     RunOptions& opts);

struct StepRecord {
  std::size_t step = 0;
  std::size_t n = 0;
  double cost = 0.0;
  double opt_est = 0.0;
  std::size_t added = 0;
  std::size_t removed = 0;
  std::int64_t mr_type1 = 0;
  std::int64_t mr_type2 = 0;
  std::int64_t mr_type3 = 0;
  std::int64_t epoch = 0;
  std::int64_t ns = 0;
};

struct RunSummary {
  std::size_t steps = 0;
  std::int64_t total_added = 0;
  std::int64_t total_removed = 0;
  double amortized_recourse = 0.0;
  std::int64_t mr_type1 = 0;
  std::int64_t mr_type2 = 0;
  std::int64_t mr_type3 = 0;
  std::int64_t epochs = 0;
  double max_cost_ratio = 0.0;  // max cost / opt_est over rows with opt_est > 0
  double final_cost = 0.0;
  std::size_t final_n = 0;
  std::int64_t total_ns = 0;
  double mean_ns = 0.0;
  int max_contaminated = 0;
  std::int64_t repeat_calls = 0;
};

struct RunResult {
  std::vector<StepRecord> rows;
  RunSummary summary;
};

// Replays the stream through a fresh engine over `space`.
RunResult Run(const Stream& stream, const DistanceOracle& space, const EngineConfig& cfg,
              const RunOptions& opts = {});

// Totals recomputed from the rows (the summary is built this way).
RunSummary Summarize(const std::vector<StepRecord>& rows);

inline constexpr const char* kCsvHeader =
    "step,n,cost,opt_est,added,removed,mr_type1,mr_type2,mr_type3,epoch,ns";

void WriteCsv(std::ostream& out, const std::vector<StepRecord>& rows);
std::vector<StepRecord> ReadCsv(std::istream& in);
std::string SummaryJson(const RunSummary& s, const std::string& label = "");
RunSummary ParseSummaryJson(const std::string& text);

// One assertion class of a checked replay.
struct CheckClass {
  std::int64_t checked = 0;
  std::int64_t failed = 0;
  std::string first_failure;

  bool ok() const { return failed == 0; }
  void Record(bool pass, const std::string& what);
};

struct CheckOptions {
  // Lemma checkers run on every lemma_interval-th snapshot.
  std::size_t lemma_interval = 10;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

struct CheckReport {
  // Keys: size, boundary_cost, midepoch_cost, lazy_monotone, robust,
  // contamination, projection, makerobust_once, epoch_diff, lemma_lazy,
  // lemma_projection, lemma_stability.
  std::map<std::string, CheckClass> classes;
  std::size_t steps = 0;
  std::int64_t epoch_boundaries = 0;
  std::int64_t bootstrap_entries = 0;
  double max_boundary_ratio = 0.0;
  double max_midepoch_ratio = 0.0;

  bool ok() const;
  std::string ToJson() const;
};

// Replays the stream with exact subroutines switched on and checks every
// step against exact optima. Refuses (kBudgetExceeded) when the ground space
// is too large for the enumeration budget.
CheckReport Check(const Stream& stream, const DistanceOracle& space, EngineConfig cfg,
                  const CheckOptions& opts = {});

// Comparison table (markdown) of labelled run summaries.
std::string ReportTable(const std::vector<std::pair<std::string, RunSummary>>& runs);

}  // namespace dynkmed

#endif  // DYNKMED_HARNESS_HPP_
