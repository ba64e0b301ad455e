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

#include "dynkmed/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dynkmed/oracles.hpp"
#include "json.hpp"

namespace dynkmed {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kRelTol = 1e-9;

bool LessOrClose(double lhs, double rhs) {
  return lhs <= rhs + kRelTol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

UpdateEvent ToUpdate(const StreamEvent& ev) {
  return {ev.op, MakeId(ev.id), ev.weight};
}

}  // namespace

void ApplyConfigJson(const std::string& json_text, std::size_t k, double delta,
                     EngineConfig& cfg, RunOptions& opts) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorCode::kParse, "config must be a JSON object");
  try {
    const std::string mode = j.value("mode", cfg.practical_mode ? "practical" : "paper");
    const double beta = j.value("beta", cfg.solver.beta_target);
    const std::uint64_t seed = j.value("seed", cfg.seed);
    SolverConfig solver = cfg.solver;
    if (mode == "practical") {
      cfg = EngineConfig::Practical(k, delta);
    } else if (mode == "paper") {
      cfg = EngineConfig::Paper(k, delta, beta);
    } else {
      Fail(ErrorCode::kParse, "mode must be \"practical\" or \"paper\"");
    }
    solver.beta_target = beta;
    cfg.solver = solver;
    cfg.seed = seed;
    for (const auto& [key, v] : j.items()) {
      if (key == "mode" || key == "beta" || key == "seed") continue;
      if (key == "exact") {
        cfg.solver.mode = v.get<bool>() ? SubroutineMode::kExact : SubroutineMode::kSampled;
      } else if (key == "gamma") {
        cfg.gamma = v.get<double>();
      } else if (key == "big_c") {
        cfg.big_c = v.get<double>();
      } else if (key == "removal_threshold") {
        cfg.removal_threshold = v.get<double>();
      } else if (key == "stability_eta") {
        cfg.stability_eta = v.get<double>();
      } else if (key == "develop_slack_multiplier") {
        cfg.develop_slack_multiplier = v.get<double>();
      } else if (key == "sample_count_multiplier") {
        cfg.solver.sample_count_multiplier = v.get<int>();
      } else if (key == "ls_iteration_multiplier") {
        cfg.solver.ls_iteration_multiplier = v.get<int>();
      } else if (key == "swap_candidate_multiplier") {
        cfg.solver.swap_candidate_multiplier = v.get<int>();
      } else if (key == "swap_improvement_factor") {
        cfg.solver.swap_improvement_factor = v.get<double>();
      } else if (key == "enumeration_budget") {
        cfg.solver.enumeration_budget = v.get<std::uint64_t>();
      } else if (key == "max_star_weight") {
        cfg.develop.max_star_weight = v.get<double>();
      } else if (key == "monitor_interval") {
        opts.monitor_interval = v.get<std::size_t>();
      } else if (key == "timing") {
        opts.timing = v.get<bool>();
      } else {
        Fail(ErrorCode::kParse, "unknown config key \"" + key + "\"");
      }
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad config value: ") + e.what());
  }
  cfg.Validate();
  if (opts.monitor_interval == 0) Fail(ErrorCode::kInvalidArgument, "monitor_interval must be >= 1");
}

void ApplyConfigFile(const std::string& path, std::size_t k, double delta, EngineConfig& cfg,
                     RunOptions& opts) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  std::stringstream text;
  text << in.rdbuf();
  ApplyConfigJson(text.str(), k, delta, cfg, opts);
}

RunResult Run(const Stream& stream, const DistanceOracle& space, const EngineConfig& cfg,
              const RunOptions& opts) {
  if (opts.monitor_interval == 0) Fail(ErrorCode::kInvalidArgument, "monitor_interval must be >= 1");
  Engine engine(space, cfg);
  Rng monitor_rng = MakeRng(cfg.seed, "monitor");
  RunResult result;
  result.rows.reserve(stream.events.size());
  double opt_est = 0.0;
  std::size_t line = 1;
  for (const auto& ev : stream.events) {
    ++line;
    RecourseReport rep;
    const auto start = std::chrono::steady_clock::now();
    try {
      rep = engine.ApplyUpdate(ToUpdate(ev));
    } catch (const Error& e) {
      Fail(e.code(), "event on line " + std::to_string(line) + ": " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();

    StepRecord row;
    row.step = result.rows.size() + 1;
    row.n = engine.points().size();
    row.cost = engine.CurrentCost();
    if ((row.step - 1) % opts.monitor_interval == 0) {
      const PointSet& P = engine.points();
      if (P.size() <= cfg.k) {
        opt_est = 0.0;
      } else {
        const std::vector<PointId> ids = P.Ids();
        const CenterSet est = StaticKMedian(space, P, cfg.k, ids, cfg.solver, monitor_rng);
        opt_est = Cost(space, est, P);
      }
    }
    row.opt_est = opt_est;
    row.added = rep.added.size();
    row.removed = rep.removed.size();
    row.mr_type1 = rep.robustify.type1_calls;
    row.mr_type2 = rep.robustify.type2_calls;
    row.mr_type3 = rep.robustify.type3_calls;
    row.epoch = engine.epoch_id();
    row.ns = opts.timing
                 ? std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()
                 : 0;
    result.rows.push_back(row);
  }
  result.summary = Summarize(result.rows);
  result.summary.max_contaminated = engine.metrics().max_contaminated;
  result.summary.repeat_calls = engine.metrics().robustify.repeat_calls;
  return result;
}

RunSummary Summarize(const std::vector<StepRecord>& rows) {
  RunSummary s;
  s.steps = rows.size();
  for (const auto& r : rows) {
    s.total_added += static_cast<std::int64_t>(r.added);
    s.total_removed += static_cast<std::int64_t>(r.removed);
    s.mr_type1 += r.mr_type1;
    s.mr_type2 += r.mr_type2;
    s.mr_type3 += r.mr_type3;
    s.total_ns += r.ns;
    if (r.opt_est > 0.0) s.max_cost_ratio = std::max(s.max_cost_ratio, r.cost / r.opt_est);
  }
  if (!rows.empty()) {
    s.epochs = rows.back().epoch;
    s.final_cost = rows.back().cost;
    s.final_n = rows.back().n;
    const double steps = static_cast<double>(rows.size());
    s.amortized_recourse = static_cast<double>(s.total_added + s.total_removed) / steps;
    s.mean_ns = static_cast<double>(s.total_ns) / steps;
  }
  return s;
}

void WriteCsv(std::ostream& out, const std::vector<StepRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << r.n << ',' << FormatDouble(r.cost) << ',' << FormatDouble(r.opt_est)
        << ',' << r.added << ',' << r.removed << ',' << r.mr_type1 << ',' << r.mr_type2 << ','
        << r.mr_type3 << ',' << r.epoch << ',' << r.ns << '\n';
  }
}

std::vector<StepRecord> ReadCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    Fail(ErrorCode::kParse, "CSV header mismatch");
  }
  std::vector<StepRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    StepRecord r;
    unsigned long long step, n, added, removed;
    long long t1, t2, t3, epoch, ns;
    if (std::sscanf(line.c_str(), "%llu,%llu,%lf,%lf,%llu,%llu,%lld,%lld,%lld,%lld,%lld", &step,
                    &n, &r.cost, &r.opt_est, &added, &removed, &t1, &t2, &t3, &epoch,
                    &ns) != 11) {
      Fail(ErrorCode::kParse, "CSV line " + std::to_string(line_no) + " malformed");
    }
    r.step = step;
    r.n = n;
    r.added = added;
    r.removed = removed;
    r.mr_type1 = t1;
    r.mr_type2 = t2;
    r.mr_type3 = t3;
    r.epoch = epoch;
    r.ns = ns;
    rows.push_back(r);
  }
  return rows;
}

std::string SummaryJson(const RunSummary& s, const std::string& label) {
  Json j;
  if (!label.empty()) j["label"] = label;
  j["steps"] = s.steps;
  j["total_added"] = s.total_added;
  j["total_removed"] = s.total_removed;
  j["amortized_recourse"] = s.amortized_recourse;
  j["mr_type1"] = s.mr_type1;
  j["mr_type2"] = s.mr_type2;
  j["mr_type3"] = s.mr_type3;
  j["epochs"] = s.epochs;
  j["max_cost_ratio"] = s.max_cost_ratio;
  j["final_cost"] = s.final_cost;
  j["final_n"] = s.final_n;
  j["total_ns"] = s.total_ns;
  j["mean_ns"] = s.mean_ns;
  j["max_contaminated"] = s.max_contaminated;
  j["repeat_calls"] = s.repeat_calls;
  return j.dump(2);
}

RunSummary ParseSummaryJson(const std::string& text) {
  RunSummary s;
  try {
    const Json j = Json::parse(text);
    s.steps = j.at("steps").get<std::size_t>();
    s.total_added = j.at("total_added").get<std::int64_t>();
    s.total_removed = j.at("total_removed").get<std::int64_t>();
    s.amortized_recourse = j.at("amortized_recourse").get<double>();
    s.mr_type1 = j.at("mr_type1").get<std::int64_t>();
    s.mr_type2 = j.at("mr_type2").get<std::int64_t>();
    s.mr_type3 = j.at("mr_type3").get<std::int64_t>();
    s.epochs = j.at("epochs").get<std::int64_t>();
    s.max_cost_ratio = j.at("max_cost_ratio").get<double>();
    s.final_cost = j.at("final_cost").get<double>();
    s.final_n = j.at("final_n").get<std::size_t>();
    s.total_ns = j.at("total_ns").get<std::int64_t>();
    s.mean_ns = j.at("mean_ns").get<double>();
    s.max_contaminated = j.value("max_contaminated", 0);
    s.repeat_calls = j.value("repeat_calls", std::int64_t{0});
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad summary JSON: ") + e.what());
  }
  return s;
}

void CheckClass::Record(bool pass, const std::string& what) {
  ++checked;
  if (!pass) {
    if (failed == 0) first_failure = what;
    ++failed;
  }
}

bool CheckReport::ok() const {
  return std::all_of(classes.begin(), classes.end(), [](const auto& kv) { return kv.second.ok(); });
}

std::string CheckReport::ToJson() const {
  Json j;
  j["ok"] = ok();
  j["steps"] = steps;
  j["epoch_boundaries"] = epoch_boundaries;
  j["bootstrap_entries"] = bootstrap_entries;
  j["max_boundary_ratio"] = max_boundary_ratio;
  j["max_midepoch_ratio"] = max_midepoch_ratio;
  Json cls = Json::object();
  for (const auto& [name, c] : classes) {
    Json e;
    e["pass"] = c.ok();
    e["checked"] = c.checked;
    e["failed"] = c.failed;
    if (!c.ok()) e["first_failure"] = c.first_failure;
    cls[name] = e;
  }
  j["classes"] = cls;
  return j.dump(2);
}

CheckReport Check(const Stream& stream, const DistanceOracle& space, EngineConfig cfg,
                  const CheckOptions& opts) {
  cfg.UseExactSubroutines(opts.budget);
  cfg.Validate();
  const std::vector<PointId> ground = space.GroundIds();
  if (Binomial(ground.size(), std::min(cfg.k, ground.size())) > opts.budget) {
    Fail(ErrorCode::kBudgetExceeded, "ground space of " + std::to_string(ground.size()) +
                                         " points is too large for exact checking");
  }
  const std::size_t k = cfg.k;
  const double mid_bound = 32.0 + 432.0 * cfg.gamma;
  const double diff_slack = 2.0 * cfg.develop_slack_multiplier + 2.0;
  const int contamination_bound = ContaminationBound(cfg.delta);

  CheckReport report;
  for (const char* name :
       {"size", "boundary_cost", "midepoch_cost", "lazy_monotone", "robust", "contamination",
        "projection", "makerobust_once", "epoch_diff", "lemma_lazy", "lemma_projection",
        "lemma_stability", "index"}) {
    report.classes[name];
  }
  auto& C = report.classes;

  Engine engine(space, cfg);
  PointSet snapshot;
  std::size_t line = 1;
  for (const auto& ev : stream.events) {
    ++line;
    const std::size_t ell_before = engine.ell();
    const std::int64_t diff_violations_before = engine.metrics().epoch_diff_violations;
    // Input before a sampled update, for the lazy-updates lemma (s = 1).
    if ((report.steps + 1) % opts.lemma_interval == 0) snapshot = engine.points();
    RecourseReport rep;
    try {
      rep = engine.ApplyUpdate(ToUpdate(ev));
    } catch (const Error& e) {
      Fail(e.code(), "event on line " + std::to_string(line) + ": " + e.what());
    }
    ++report.steps;
    const std::string at = "step " + std::to_string(report.steps);
    const PointSet& P = engine.points();
    const CenterSet U = engine.CurrentSolution();
    const bool boundary = rep.epoch_boundary && !engine.in_bootstrap();
    if (boundary) ++report.epoch_boundaries;

    C["size"].Record(U.size() <= k, at + ": " + std::to_string(U.size()) + " centers");
    if (!P.empty()) {
      const double cost = Cost(space, U, P);
      const double opt = OptExactImproper(space, P, k, opts.budget).cost;
      C["index"].Record(std::abs(engine.CurrentCost() - cost) <= kRelTol * std::max(1.0, cost),
                        at + ": index cost disagrees with direct cost");
      const double ratio = opt > 0.0 ? cost / opt : (cost > 0.0 ? kInfinity : 0.0);
      if (boundary) {
        report.max_boundary_ratio = std::max(report.max_boundary_ratio, ratio);
        C["boundary_cost"].Record(LessOrClose(cost, 8.0 * opt),
                                  at + ": cost " + FormatDouble(cost) + " > 8 OPT " +
                                      FormatDouble(opt));
      } else {
        report.max_midepoch_ratio = std::max(report.max_midepoch_ratio, ratio);
        C["midepoch_cost"].Record(LessOrClose(cost, mid_bound * opt),
                                  at + ": cost " + FormatDouble(cost) + " > (32+432 gamma) OPT " +
                                      FormatDouble(opt));
      }
      const double proper = Cost(space, engine.ProjectToProper(), P);
      C["projection"].Record(LessOrClose(proper, 2.0 * cost),
                             at + ": proper cost " + FormatDouble(proper) + " > 2 x " +
                                 FormatDouble(cost));
      if (!engine.in_bootstrap() && !rep.epoch_boundary) {
        C["lazy_monotone"].Record(LessOrClose(cost, engine.epoch_start_cost()),
                                  at + ": lazy cost rose above the epoch start");
      }
    }
    if (boundary) {
      const RobustCheck rc = VerifyRobust(space, P, engine.epoch_initial(), cfg.delta, ground);
      C["robust"].Record(rc.ok, at + ": " + rc.reason);
    }
    C["contamination"].Record(rep.contaminated <= contamination_bound,
                              at + ": " + std::to_string(rep.contaminated) +
                                  " centers contaminated");
    C["makerobust_once"].Record(rep.robustify.repeat_calls == 0,
                                at + ": MakeRobust called on its own output");
    if (rep.epoch_diff >= 0) {
      C["epoch_diff"].Record(
          engine.metrics().epoch_diff_violations == diff_violations_before,
          at + ": |W (+) U_init| = " + std::to_string(rep.epoch_diff) + " exceeds " +
              FormatDouble(diff_slack * static_cast<double>(ell_before + 1)));
    }

    if (report.steps % opts.lemma_interval == 0 && !P.empty()) {
      C["lemma_lazy"].Record(CheckLazyUpdatesLemma(space, snapshot, P, k, opts.budget),
                             at + ": lazy-updates inequality failed");
      if (U.size() >= k) {
        C["lemma_projection"].Record(CheckProjectionLemma(space, P, U, k, opts.budget),
                                     at + ": projection inequality failed");
      }
      const std::size_t r = (report.steps / opts.lemma_interval) % k;
      const double eta = 1.0 + static_cast<double>((report.steps / opts.lemma_interval) % 3);
      C["lemma_stability"].Record(
          CheckDoubleSidedStability(space, P, k, r, eta, opts.budget).ok(),
          at + ": double-sided stability failed");
    }
  }
  report.bootstrap_entries = engine.metrics().bootstrap_entries;
  return report;
}

std::string ReportTable(const std::vector<std::pair<std::string, RunSummary>>& runs) {
  std::ostringstream out;
  out << "| run | steps | final n | recourse/update | MR I/II/III | epochs | max cost/opt_est "
         "| mean us/update |\n";
  out << "|---|---:|---:|---:|---|---:|---:|---:|\n";
  for (const auto& [label, s] : runs) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "| %s | %zu | %zu | %.3f | %" PRId64 "/%" PRId64 "/%" PRId64 " | %" PRId64
                  " | %.3f | %.1f |\n",
                  label.c_str(), s.steps, s.final_n, s.amortized_recourse, s.mr_type1, s.mr_type2,
                  s.mr_type3, s.epochs, s.max_cost_ratio, s.mean_ns / 1000.0);
    out << buf;
  }
  return out.str();
}

}  // namespace dynkmed
