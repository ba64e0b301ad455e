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

// dynkmed: generate update streams, replay them through the engine, check
// them against exact oracles and tabulate run summaries.
//
// Exit codes: 0 success, 1 assertion failure, 2 usage or input error.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynkmed/dynkmed.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

int Report(dkm_status st) {
  if (st == DKM_OK) return kExitOk;
  std::fprintf(stderr, "dynkmed: %s: %s\n", dkm_status_name(st), dkm_last_error());
  return st == DKM_ERR_ASSERTION ? kExitAssertion : kExitUsage;
}

struct JobFlags {
  std::string stream;
  std::size_t k = 0;
  std::string config;
  std::uint64_t seed = 0;
  bool practical = false;
  bool paper = false;

  void Add(CLI::App* cmd) {
    cmd->add_option("stream", stream, "Stream file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--k", k, "Number of centers")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Root seed of the engine");
    auto* practical_flag =
        cmd->add_flag("--practical", practical, "Practical constants (gamma=4, C=12, ...)");
    auto* paper_flag = cmd->add_flag("--paper-constants", paper, "Constants of the analysis (default)");
    practical_flag->excludes(paper_flag);
  }

  dkm_job Job(const CLI::App* cmd) const {
    dkm_job job;
    dkm_job_default(&job);
    job.stream_path = stream.c_str();
    job.k = k;
    job.config_path = config.empty() ? nullptr : config.c_str();
    job.practical = practical ? 1 : 0;
    job.has_seed = cmd->count("--seed") > 0 ? 1 : 0;
    job.seed = seed;
    return job;
  }
};

std::string SummaryPathFor(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  if (p.extension() == ".csv") p.replace_extension();
  return p.string() + ".summary.json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully dynamic metric k-median: stream generation, replay and verification"};
  app.require_subcommand(1);

  // gen
  dkm_gen_options gen;
  dkm_gen_options_default(&gen);
  std::string gen_kind = gen.kind;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a deterministic update stream");
  gen_cmd->add_option("--kind", gen_kind, "Stream kind")
      ->check(CLI::IsMember(
          {"uniform-box", "two-cluster-drift", "sliding-window", "adversarial-churn"}));
  gen_cmd->add_option("--n-max", gen.n_max, "Largest live set")->check(CLI::PositiveNumber);
  gen_cmd->add_option("-T,--steps", gen.steps, "Number of updates")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--delta", gen.delta, "Aspect-ratio bound")->check(CLI::Range(1.0, 1e300));
  gen_cmd->add_option("--dim", gen.dim, "Coordinate dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--pool", gen.pool, "Ground locations (0: 2 * n-max)");
  gen_cmd->add_option("--max-weight", gen.max_weight, "Insert weights drawn from 1..max")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen_out, "Output stream file")->required();

  // run
  JobFlags run_flags;
  std::string run_out;
  std::string run_summary;
  bool no_timing = false;
  auto* run_cmd = app.add_subcommand("run", "Replay a stream and record per-step metrics");
  run_flags.Add(run_cmd);
  run_cmd->add_option("--out", run_out, "CSV output (default: stdout)");
  run_cmd->add_option("--summary", run_summary,
                      "JSON summary output (default: <out>.summary.json)");
  run_cmd->add_flag("--no-timing", no_timing, "Write 0 in the ns column");

  // check
  JobFlags check_flags;
  std::string check_out;
  std::uint64_t budget = 0;
  auto* check_cmd = app.add_subcommand("check", "Replay a stream against exact oracles");
  check_flags.Add(check_cmd);
  check_cmd->add_option("--budget", budget, "Enumeration budget (subsets per exact solve)");
  check_cmd->add_option("--out", check_out, "JSON verdict output");

  // report
  std::vector<std::string> summaries;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Tabulate run summaries");
  report_cmd->add_option("summaries", summaries, "Summary JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report_out, "Markdown output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*gen_cmd) {
    gen.kind = gen_kind.c_str();
    return Report(dkm_gen_stream(&gen, gen_out.c_str()));
  }

  if (*run_cmd) {
    dkm_job job = run_flags.Job(run_cmd);
    job.timing = no_timing ? 0 : 1;
    if (run_summary.empty() && !run_out.empty()) run_summary = SummaryPathFor(run_out);
    return Report(dkm_run(&job, run_out.empty() ? nullptr : run_out.c_str(),
                          run_summary.empty() ? nullptr : run_summary.c_str()));
  }

  if (*check_cmd) {
    dkm_job job = check_flags.Job(check_cmd);
    job.timing = 0;
    job.budget = budget;
    int passed = 0;
    const dkm_status st =
        dkm_check(&job, check_out.empty() ? nullptr : check_out.c_str(), nullptr, &passed);
    if (st != DKM_OK) return Report(st);
    return passed ? kExitOk : kExitAssertion;
  }

  std::vector<const char*> paths;
  for (const auto& s : summaries) paths.push_back(s.c_str());
  return Report(
      dkm_report(paths.data(), paths.size(), report_out.empty() ? nullptr : report_out.c_str()));
}
