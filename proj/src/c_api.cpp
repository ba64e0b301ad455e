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

#include "dynkmed/dynkmed.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "dynkmed/engine.hpp"
#include "dynkmed/harness.hpp"
#include "dynkmed/metric.hpp"
#include "dynkmed/stream.hpp"

struct dkm_space {
  std::unique_ptr<dynkmed::MetricSpace> space;
};

struct dkm_engine {
  std::unique_ptr<dynkmed::Engine> engine;
};

namespace {

using dynkmed::ErrorCode;

thread_local std::string g_last_error;

dkm_status Fail(dkm_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

dkm_status ToStatus(ErrorCode code) {
  return static_cast<dkm_status>(static_cast<int>(code));
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
dkm_status Guard(F&& body) {
  try {
    body();
    return DKM_OK;
  } catch (const dynkmed::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(DKM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(DKM_ERR_INTERNAL, e.what());
  }
}

void Require(bool cond, const char* what) {
  if (!cond) dynkmed::Fail(ErrorCode::kInvalidArgument, what);
}

dynkmed::EngineConfig ToEngineConfig(const dkm_config& c) {
  dynkmed::EngineConfig cfg;
  cfg.k = c.k;
  cfg.delta = c.delta;
  cfg.gamma = c.gamma;
  cfg.big_c = c.big_c;
  cfg.removal_threshold = c.removal_threshold;
  cfg.stability_eta = c.stability_eta;
  cfg.develop_slack_multiplier = c.develop_slack_multiplier;
  cfg.practical_mode = c.practical_mode != 0;
  cfg.seed = c.seed;
  cfg.solver.beta_target = c.beta_target;
  cfg.solver.sample_count_multiplier = c.sample_count_multiplier;
  cfg.solver.ls_iteration_multiplier = c.ls_iteration_multiplier;
  cfg.solver.swap_candidate_multiplier = c.swap_candidate_multiplier;
  cfg.solver.swap_improvement_factor = c.swap_improvement_factor;
  cfg.solver.enumeration_budget = c.enumeration_budget;
  if (c.exact_subroutines) cfg.UseExactSubroutines(c.enumeration_budget);
  return cfg;
}

void FillRecourse(const dynkmed::RecourseReport& rep, dkm_recourse* out) {
  if (out == nullptr) return;
  out->added = rep.added.size();
  out->removed = rep.removed.size();
  out->makerobust_type1 = rep.robustify.type1_calls;
  out->makerobust_type2 = rep.robustify.type2_calls;
  out->makerobust_type3 = rep.robustify.type3_calls;
  out->epoch_boundary = rep.epoch_boundary ? 1 : 0;
  out->contaminated = rep.contaminated;
}

dkm_status CopyIds(const dynkmed::CenterSet& ids, uint32_t* out, size_t capacity, size_t* count) {
  if (count == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "count must not be NULL");
  *count = ids.size();
  if (out != nullptr) {
    for (size_t i = 0; i < ids.size() && i < capacity; ++i) out[i] = dynkmed::Raw(ids[i]);
  }
  return DKM_OK;
}

struct Job {
  dynkmed::Stream stream;
  std::unique_ptr<dynkmed::MetricSpace> space;
  dynkmed::EngineConfig cfg;
  dynkmed::RunOptions opts;
};

Job LoadJob(const dkm_job& job) {
  Require(job.stream_path != nullptr, "stream_path must not be NULL");
  Require(job.k >= 1, "k must be >= 1");
  Job out;
  out.stream = dynkmed::ReadStreamFile(job.stream_path);
  const std::string base = std::filesystem::path(job.stream_path).parent_path().string();
  out.space = dynkmed::BuildSpace(out.stream, base.empty() ? "." : base);
  const double delta = out.space->delta();
  out.cfg = job.practical ? dynkmed::EngineConfig::Practical(job.k, delta)
                          : dynkmed::EngineConfig::Paper(job.k, delta);
  if (job.config_path != nullptr) {
    dynkmed::ApplyConfigFile(job.config_path, job.k, delta, out.cfg, out.opts);
  }
  if (job.has_seed) out.cfg.seed = job.seed;
  if (!job.timing) out.opts.timing = false;
  if (job.budget != 0) out.cfg.solver.enumeration_budget = job.budget;
  out.cfg.Validate();
  return out;
}

void WriteText(const char* path, const std::string& text) {
  if (path == nullptr) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) dynkmed::Fail(ErrorCode::kIo, std::string("cannot write ") + path);
  out << text;
  if (!out) dynkmed::Fail(ErrorCode::kIo, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* dkm_last_error(void) { return g_last_error.c_str(); }

const char* dkm_status_name(dkm_status status) {
  switch (status) {
    case DKM_OK: return "ok";
    case DKM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DKM_ERR_UNKNOWN_ID: return "unknown id";
    case DKM_ERR_DUPLICATE_ID: return "duplicate id";
    case DKM_ERR_METRIC_VIOLATION: return "metric violation";
    case DKM_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case DKM_ERR_IO: return "i/o error";
    case DKM_ERR_PARSE: return "parse error";
    case DKM_ERR_ASSERTION: return "assertion failed";
    case DKM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

dkm_status dkm_space_new_coords(size_t dim, double norm_p, double delta, dkm_space** out) {
  if (out == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    auto space = std::make_unique<dynkmed::MetricSpace>(
        dynkmed::MetricSpace::FromCoordinates(dim, norm_p, delta));
    *out = new dkm_space{std::move(space)};
  });
}

dkm_status dkm_space_load_matrix(const char* path, double delta, dkm_space** out) {
  if (out == nullptr || path == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "path and out must not be NULL");
  }
  *out = nullptr;
  return Guard([&] {
    auto space = std::make_unique<dynkmed::MetricSpace>(dynkmed::LoadMatrixFile(path, delta));
    *out = new dkm_space{std::move(space)};
  });
}

dkm_status dkm_space_add_point(dkm_space* space, uint32_t id, const double* coords, size_t dim) {
  if (space == nullptr || (coords == nullptr && dim > 0)) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "space and coords must not be NULL");
  }
  return Guard([&] {
    space->space->AddPoint(dynkmed::MakeId(id), std::span<const double>(coords, dim));
  });
}

dkm_status dkm_space_distance(const dkm_space* space, uint32_t p, uint32_t q, double* out) {
  if (space == nullptr || out == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "space and out must not be NULL");
  }
  return Guard([&] { *out = space->space->Distance(dynkmed::MakeId(p), dynkmed::MakeId(q)); });
}

void dkm_space_free(dkm_space* space) { delete space; }

void dkm_config_default(dkm_config* out, size_t k, double delta, int practical) {
  if (out == nullptr) return;
  const dynkmed::EngineConfig cfg = practical ? dynkmed::EngineConfig::Practical(k, delta)
                                              : dynkmed::EngineConfig::Paper(k, delta);
  out->k = cfg.k;
  out->delta = cfg.delta;
  out->gamma = cfg.gamma;
  out->big_c = cfg.big_c;
  out->removal_threshold = cfg.removal_threshold;
  out->stability_eta = cfg.stability_eta;
  out->develop_slack_multiplier = cfg.develop_slack_multiplier;
  out->practical_mode = cfg.practical_mode ? 1 : 0;
  out->seed = cfg.seed;
  out->exact_subroutines = cfg.solver.mode == dynkmed::SubroutineMode::kExact ? 1 : 0;
  out->enumeration_budget = cfg.solver.enumeration_budget;
  out->beta_target = cfg.solver.beta_target;
  out->sample_count_multiplier = cfg.solver.sample_count_multiplier;
  out->ls_iteration_multiplier = cfg.solver.ls_iteration_multiplier;
  out->swap_candidate_multiplier = cfg.solver.swap_candidate_multiplier;
  out->swap_improvement_factor = cfg.solver.swap_improvement_factor;
}

dkm_status dkm_engine_new(const dkm_space* space, const dkm_config* cfg, dkm_engine** out) {
  if (space == nullptr || cfg == nullptr || out == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "space, cfg and out must not be NULL");
  }
  *out = nullptr;
  return Guard([&] {
    const dynkmed::EngineConfig ecfg = ToEngineConfig(*cfg);
    ecfg.Validate();
    *out = new dkm_engine{std::make_unique<dynkmed::Engine>(*space->space, ecfg)};
  });
}

dkm_status dkm_engine_insert(dkm_engine* engine, uint32_t id, double weight,
                             dkm_recourse* report) {
  if (engine == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "engine must not be NULL");
  return Guard([&] {
    const dynkmed::UpdateEvent ev{dynkmed::UpdateEvent::Op::kInsert, dynkmed::MakeId(id), weight};
    FillRecourse(engine->engine->ApplyUpdate(ev), report);
  });
}

dkm_status dkm_engine_delete(dkm_engine* engine, uint32_t id, dkm_recourse* report) {
  if (engine == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "engine must not be NULL");
  return Guard([&] {
    const dynkmed::UpdateEvent ev{dynkmed::UpdateEvent::Op::kDelete, dynkmed::MakeId(id), 1.0};
    FillRecourse(engine->engine->ApplyUpdate(ev), report);
  });
}

dkm_status dkm_engine_solution(const dkm_engine* engine, uint32_t* ids, size_t capacity,
                               size_t* count) {
  if (engine == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "engine must not be NULL");
  return CopyIds(engine->engine->CurrentSolution(), ids, capacity, count);
}

dkm_status dkm_engine_proper_solution(const dkm_engine* engine, uint32_t* ids, size_t capacity,
                                      size_t* count) {
  if (engine == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "engine must not be NULL");
  dynkmed::CenterSet proper;
  const dkm_status st = Guard([&] { proper = engine->engine->ProjectToProper(); });
  if (st != DKM_OK) return st;
  return CopyIds(proper, ids, capacity, count);
}

dkm_status dkm_engine_cost(const dkm_engine* engine, double* out) {
  if (engine == nullptr || out == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "engine and out must not be NULL");
  }
  return Guard([&] { *out = engine->engine->CurrentCost(); });
}

dkm_status dkm_engine_metrics(const dkm_engine* engine, dkm_metrics* out) {
  if (engine == nullptr || out == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "engine and out must not be NULL");
  }
  const dynkmed::EngineMetrics& m = engine->engine->metrics();
  out->updates = m.updates;
  out->epochs = m.epochs;
  out->bootstrap_entries = m.bootstrap_entries;
  out->total_added = m.total_added;
  out->total_removed = m.total_removed;
  out->makerobust_type1 = m.robustify.type1_calls;
  out->makerobust_type2 = m.robustify.type2_calls;
  out->makerobust_type3 = m.robustify.type3_calls;
  out->repeat_calls = m.robustify.repeat_calls;
  out->max_contaminated = m.max_contaminated;
  out->epoch_diff_violations = m.epoch_diff_violations;
  out->ell = m.ell;
  out->bootstrap = m.bootstrap ? 1 : 0;
  return DKM_OK;
}

void dkm_engine_free(dkm_engine* engine) { delete engine; }

void dkm_gen_options_default(dkm_gen_options* opts) {
  if (opts == nullptr) return;
  const dynkmed::GenOptions g;
  opts->kind = "uniform-box";
  opts->n_max = 100;
  opts->steps = 1000;
  opts->seed = 1;
  opts->delta = g.delta;
  opts->dim = g.dim;
  opts->pool = g.pool;
  opts->max_weight = g.max_weight;
}

dkm_status dkm_gen_stream(const dkm_gen_options* opts, const char* out_path) {
  if (opts == nullptr || opts->kind == nullptr || out_path == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "opts, kind and out_path must not be NULL");
  }
  return Guard([&] {
    dynkmed::GenOptions g;
    g.delta = opts->delta;
    g.dim = opts->dim;
    g.pool = opts->pool;
    g.max_weight = opts->max_weight;
    const dynkmed::Stream s = dynkmed::GenerateStream(dynkmed::ParseStreamKind(opts->kind),
                                                      opts->n_max, opts->steps, opts->seed, g);
    dynkmed::WriteStreamFile(out_path, s);
  });
}

void dkm_job_default(dkm_job* job) {
  if (job == nullptr) return;
  job->stream_path = nullptr;
  job->k = 1;
  job->config_path = nullptr;
  job->practical = 1;
  job->has_seed = 0;
  job->seed = 1;
  job->timing = 1;
  job->budget = 0;
}

dkm_status dkm_run(const dkm_job* job, const char* csv_path, const char* summary_path) {
  if (job == nullptr) return Fail(DKM_ERR_INVALID_ARGUMENT, "job must not be NULL");
  return Guard([&] {
    Job j = LoadJob(*job);
    const dynkmed::RunResult result = dynkmed::Run(j.stream, *j.space, j.cfg, j.opts);
    if (csv_path != nullptr) {
      std::ostringstream csv;
      dynkmed::WriteCsv(csv, result.rows);
      WriteText(csv_path, csv.str());
    }
    if (summary_path != nullptr) {
      const std::string label = std::filesystem::path(job->stream_path).stem().string();
      WriteText(summary_path, dynkmed::SummaryJson(result.summary, label) + "\n");
    }
  });
}

dkm_status dkm_check(const dkm_job* job, const char* report_path, const char* lines_path,
                     int* passed) {
  if (job == nullptr || passed == nullptr) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "job and passed must not be NULL");
  }
  *passed = 0;
  return Guard([&] {
    Job j = LoadJob(*job);
    dynkmed::CheckOptions opts;
    opts.budget = j.cfg.solver.enumeration_budget;
    const dynkmed::CheckReport report = dynkmed::Check(j.stream, *j.space, j.cfg, opts);
    std::ostringstream lines;
    for (const auto& [name, c] : report.classes) {
      lines << (c.ok() ? "PASS " : "FAIL ") << name << " checked=" << c.checked
            << " failed=" << c.failed;
      if (!c.ok()) lines << " first: " << c.first_failure;
      lines << "\n";
    }
    lines << (report.ok() ? "PASS" : "FAIL") << " overall steps=" << report.steps
          << " epoch_boundaries=" << report.epoch_boundaries << "\n";
    WriteText(lines_path, lines.str());
    if (report_path != nullptr) WriteText(report_path, report.ToJson() + "\n");
    *passed = report.ok() ? 1 : 0;
  });
}

dkm_status dkm_report(const char* const* summary_paths, size_t count, const char* out_path) {
  if (summary_paths == nullptr && count > 0) {
    return Fail(DKM_ERR_INVALID_ARGUMENT, "summary_paths must not be NULL");
  }
  return Guard([&] {
    std::vector<std::pair<std::string, dynkmed::RunSummary>> runs;
    for (size_t i = 0; i < count; ++i) {
      Require(summary_paths[i] != nullptr, "summary path must not be NULL");
      std::ifstream in(summary_paths[i]);
      if (!in) dynkmed::Fail(ErrorCode::kIo, std::string("cannot open ") + summary_paths[i]);
      std::stringstream text;
      text << in.rdbuf();
      std::string label = std::filesystem::path(summary_paths[i]).stem().string();
      runs.emplace_back(std::move(label), dynkmed::ParseSummaryJson(text.str()));
    }
    WriteText(out_path, dynkmed::ReportTable(runs));
  });
}

}  // extern "C"
