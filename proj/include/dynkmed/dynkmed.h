/*
 * Copyright 2026 The dynkmed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the dynkmed shared library: fully dynamic metric k-median
 * with bounded recourse, plus the stream/run/check harness.
 *
 * Every function returns a dkm_status. On failure a message describing the
 * error is available from dkm_last_error() on the same thread until the
 * next failing call. Handles are opaque and must be released with the
 * matching *_free function. An engine borrows its space; free the engine
 * first.
 */

#ifndef DYNKMED_DYNKMED_H_
#define DYNKMED_DYNKMED_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DKM_API __declspec(dllexport)
#else
#define DKM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dkm_status {
  DKM_OK = 0,
  DKM_ERR_INVALID_ARGUMENT = 1,
  DKM_ERR_UNKNOWN_ID = 2,
  DKM_ERR_DUPLICATE_ID = 3,
  DKM_ERR_METRIC_VIOLATION = 4,
  DKM_ERR_BUDGET_EXCEEDED = 5,
  DKM_ERR_IO = 6,
  DKM_ERR_PARSE = 7,
  DKM_ERR_ASSERTION = 8,
  DKM_ERR_INTERNAL = 9
} dkm_status;

typedef struct dkm_space dkm_space;
typedef struct dkm_engine dkm_engine;

DKM_API const char* dkm_last_error(void);
DKM_API const char* dkm_status_name(dkm_status status);

/* ---- ground spaces ---------------------------------------------------- */

/* Empty coordinate space; norm_p >= 1 (INFINITY for the max norm). */
DKM_API dkm_status dkm_space_new_coords(size_t dim, double norm_p, double delta, dkm_space** out);
/* Matrix file: n, then n rows of n distances. delta <= 0 takes the maximum. */
DKM_API dkm_status dkm_space_load_matrix(const char* path, double delta, dkm_space** out);
DKM_API dkm_status dkm_space_add_point(dkm_space* space, uint32_t id, const double* coords,
                                       size_t dim);
DKM_API dkm_status dkm_space_distance(const dkm_space* space, uint32_t p, uint32_t q, double* out);
DKM_API void dkm_space_free(dkm_space* space);

/* ---- engine ----------------------------------------------------------- */

typedef struct dkm_config {
  size_t k;
  double delta;
  double gamma;
  double big_c;
  double removal_threshold;
  double stability_eta;
  double develop_slack_multiplier;
  int practical_mode;
  uint64_t seed;
  int exact_subroutines;
  uint64_t enumeration_budget;
  double beta_target;
  int sample_count_multiplier;
  int ls_iteration_multiplier;
  int swap_candidate_multiplier;
  double swap_improvement_factor;
} dkm_config;

/* Paper constants (practical == 0) or the practical preset. */
DKM_API void dkm_config_default(dkm_config* cfg, size_t k, double delta, int practical);

typedef struct dkm_recourse {
  size_t added;
  size_t removed;
  int64_t makerobust_type1;
  int64_t makerobust_type2;
  int64_t makerobust_type3;
  int epoch_boundary;
  int contaminated;
} dkm_recourse;

typedef struct dkm_metrics {
  int64_t updates;
  int64_t epochs;
  int64_t bootstrap_entries;
  int64_t total_added;
  int64_t total_removed;
  int64_t makerobust_type1;
  int64_t makerobust_type2;
  int64_t makerobust_type3;
  int64_t repeat_calls;
  int max_contaminated;
  int64_t epoch_diff_violations;
  size_t ell;
  int bootstrap;
} dkm_metrics;

DKM_API dkm_status dkm_engine_new(const dkm_space* space, const dkm_config* cfg, dkm_engine** out);
/* `report` may be NULL. */
DKM_API dkm_status dkm_engine_insert(dkm_engine* engine, uint32_t id, double weight,
                                     dkm_recourse* report);
DKM_API dkm_status dkm_engine_delete(dkm_engine* engine, uint32_t id, dkm_recourse* report);
/* Writes min(capacity, |solution|) ids and the full size to *count. Pass
 * ids == NULL to query the size. */
DKM_API dkm_status dkm_engine_solution(const dkm_engine* engine, uint32_t* ids, size_t capacity,
                                       size_t* count);
DKM_API dkm_status dkm_engine_proper_solution(const dkm_engine* engine, uint32_t* ids,
                                              size_t capacity, size_t* count);
DKM_API dkm_status dkm_engine_cost(const dkm_engine* engine, double* out);
DKM_API dkm_status dkm_engine_metrics(const dkm_engine* engine, dkm_metrics* out);
DKM_API void dkm_engine_free(dkm_engine* engine);

/* ---- harness ---------------------------------------------------------- */

typedef struct dkm_gen_options {
  const char* kind; /* uniform-box | two-cluster-drift | sliding-window | adversarial-churn */
  size_t n_max;
  size_t steps;
  uint64_t seed;
  double delta;
  size_t dim;
  size_t pool; /* 0: 2 * n_max */
  int max_weight;
} dkm_gen_options;

DKM_API void dkm_gen_options_default(dkm_gen_options* opts);
DKM_API dkm_status dkm_gen_stream(const dkm_gen_options* opts, const char* out_path);

typedef struct dkm_job {
  const char* stream_path;
  size_t k;
  const char* config_path; /* NULL: presets only */
  int practical;
  int has_seed;
  uint64_t seed;
  int timing;
  uint64_t budget; /* 0: default enumeration budget */
} dkm_job;

DKM_API void dkm_job_default(dkm_job* job);

/* Replays a stream. Writes the per-step CSV to csv_path and the JSON
 * summary to summary_path; either may be NULL to skip it. Settings are
 * layered: mode preset, then the config file, then has_seed/seed and
 * timing. */
DKM_API dkm_status dkm_run(const dkm_job* job, const char* csv_path, const char* summary_path);

/* Oracle-checked replay. *passed is 1 when every assertion class passed.
 * The JSON verdict goes to report_path (NULL: not written); one line per
 * assertion class is written to lines_path (NULL: stdout). */
DKM_API dkm_status dkm_check(const dkm_job* job, const char* report_path, const char* lines_path,
                             int* passed);

/* Markdown comparison table of run summaries, written to out_path (NULL:
 * stdout). */
DKM_API dkm_status dkm_report(const char* const* summary_paths, size_t count,
                              const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* DYNKMED_DYNKMED_H_ */
