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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dynkmed/dynkmed.h"

namespace {

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CApiEngineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(dkm_space_new_coords(2, 2.0, 100.0, &space_), DKM_OK);
    const double pts[][2] = {{0, 0}, {3, 4}, {50, 50}, {53, 54}, {90, 10}, {10, 90}};
    for (uint32_t i = 0; i < 6; ++i) {
      ASSERT_EQ(dkm_space_add_point(space_, i, pts[i], 2), DKM_OK);
    }
    dkm_config cfg;
    dkm_config_default(&cfg, 2, 100.0, 1);
    ASSERT_EQ(dkm_engine_new(space_, &cfg, &engine_), DKM_OK);
  }
  void TearDown() override {
    dkm_engine_free(engine_);
    dkm_space_free(space_);
  }

  std::vector<uint32_t> Solution() {
    size_t count = 0;
    EXPECT_EQ(dkm_engine_solution(engine_, nullptr, 0, &count), DKM_OK);
    std::vector<uint32_t> ids(count);
    EXPECT_EQ(dkm_engine_solution(engine_, ids.data(), ids.size(), &count), DKM_OK);
    return ids;
  }

  dkm_space* space_ = nullptr;
  dkm_engine* engine_ = nullptr;
};

TEST(CApiTest, StatusNamesAndErrors) {
  EXPECT_STREQ(dkm_status_name(DKM_OK), "ok");
  dkm_space* s = nullptr;
  EXPECT_EQ(dkm_space_new_coords(0, 2.0, 100.0, &s), DKM_ERR_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(dkm_last_error()), 0u);
  EXPECT_EQ(dkm_space_new_coords(2, 2.0, 100.0, nullptr), DKM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dkm_space_load_matrix("/nonexistent/matrix.txt", 0.0, &s), DKM_ERR_IO);
}

TEST(CApiTest, Distance) {
  dkm_space* s = nullptr;
  ASSERT_EQ(dkm_space_new_coords(2, 2.0, 10.0, &s), DKM_OK);
  const double a[] = {0, 0}, b[] = {3, 4};
  ASSERT_EQ(dkm_space_add_point(s, 0, a, 2), DKM_OK);
  ASSERT_EQ(dkm_space_add_point(s, 1, b, 2), DKM_OK);
  EXPECT_EQ(dkm_space_add_point(s, 2, a, 2), DKM_ERR_METRIC_VIOLATION);
  double d = 0;
  ASSERT_EQ(dkm_space_distance(s, 0, 1, &d), DKM_OK);
  EXPECT_DOUBLE_EQ(d, 5.0);
  EXPECT_EQ(dkm_space_distance(s, 0, 9, &d), DKM_ERR_UNKNOWN_ID);
  dkm_space_free(s);
}

TEST(CApiTest, ConfigPresets) {
  dkm_config paper, practical;
  dkm_config_default(&paper, 3, 100.0, 0);
  dkm_config_default(&practical, 3, 100.0, 1);
  EXPECT_EQ(paper.gamma, 4000.0);
  EXPECT_EQ(practical.gamma, 4.0);
  EXPECT_EQ(practical.big_c, 12.0);
  EXPECT_EQ(practical.practical_mode, 1);
  EXPECT_EQ(paper.ls_iteration_multiplier, 8);
}

TEST_F(CApiEngineTest, BootstrapThenEpoch) {
  dkm_recourse rep;
  ASSERT_EQ(dkm_engine_insert(engine_, 0, 1.0, &rep), DKM_OK);
  EXPECT_EQ(rep.added, 1u);
  ASSERT_EQ(dkm_engine_insert(engine_, 2, 1.0, &rep), DKM_OK);
  EXPECT_EQ(Solution(), (std::vector<uint32_t>{0, 2}));
  double cost = -1;
  ASSERT_EQ(dkm_engine_cost(engine_, &cost), DKM_OK);
  EXPECT_EQ(cost, 0.0);

  ASSERT_EQ(dkm_engine_insert(engine_, 1, 1.0, &rep), DKM_OK);
  EXPECT_EQ(rep.epoch_boundary, 1);
  EXPECT_LE(Solution().size(), 2u);
  dkm_metrics m;
  ASSERT_EQ(dkm_engine_metrics(engine_, &m), DKM_OK);
  EXPECT_EQ(m.updates, 3);
  EXPECT_EQ(m.bootstrap, 0);
  EXPECT_EQ(m.repeat_calls, 0);

  ASSERT_EQ(dkm_engine_cost(engine_, &cost), DKM_OK);
  EXPECT_DOUBLE_EQ(cost, 5.0);  // {0,1} share a center, 2 has its own
  size_t count = 0;
  ASSERT_EQ(dkm_engine_proper_solution(engine_, nullptr, 0, &count), DKM_OK);
  EXPECT_LE(count, 2u);
}

TEST_F(CApiEngineTest, RejectsBadUpdates) {
  ASSERT_EQ(dkm_engine_insert(engine_, 0, 1.0, nullptr), DKM_OK);
  EXPECT_EQ(dkm_engine_insert(engine_, 0, 1.0, nullptr), DKM_ERR_DUPLICATE_ID);
  EXPECT_EQ(dkm_engine_delete(engine_, 4, nullptr), DKM_ERR_UNKNOWN_ID);
  EXPECT_EQ(dkm_engine_insert(engine_, 77, 1.0, nullptr), DKM_ERR_UNKNOWN_ID);
  EXPECT_EQ(dkm_engine_insert(engine_, 1, -1.0, nullptr), DKM_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(dkm_engine_delete(engine_, 0, nullptr), DKM_OK);
  EXPECT_TRUE(Solution().empty());
}

TEST_F(CApiEngineTest, PartialSolutionCopy) {
  for (uint32_t i = 0; i < 2; ++i) ASSERT_EQ(dkm_engine_insert(engine_, i, 1.0, nullptr), DKM_OK);
  uint32_t one = 99;
  size_t count = 0;
  ASSERT_EQ(dkm_engine_solution(engine_, &one, 1, &count), DKM_OK);
  EXPECT_EQ(count, 2u);
  EXPECT_EQ(one, 0u);
}

TEST(CApiHarnessTest, GenRunCheckReport) {
  const std::string dir = ::testing::TempDir();
  const std::string stream = dir + "/capi_stream.jsonl";
  dkm_gen_options gen;
  dkm_gen_options_default(&gen);
  gen.kind = "sliding-window";
  gen.n_max = 15;
  gen.steps = 120;
  gen.seed = 4;
  ASSERT_EQ(dkm_gen_stream(&gen, stream.c_str()), DKM_OK) << dkm_last_error();

  dkm_job job;
  dkm_job_default(&job);
  job.stream_path = stream.c_str();
  job.k = 3;
  job.practical = 1;
  job.timing = 0;
  const std::string csv_a = dir + "/capi_a.csv", csv_b = dir + "/capi_b.csv";
  const std::string sum_a = dir + "/capi_a.summary.json";
  ASSERT_EQ(dkm_run(&job, csv_a.c_str(), sum_a.c_str()), DKM_OK) << dkm_last_error();
  ASSERT_EQ(dkm_run(&job, csv_b.c_str(), nullptr), DKM_OK);
  EXPECT_EQ(Slurp(csv_a), Slurp(csv_b));
  EXPECT_NE(Slurp(sum_a).find("\"steps\""), std::string::npos);

  job.practical = 0;
  int passed = 0;
  const std::string lines = dir + "/capi_check.txt";
  ASSERT_EQ(dkm_check(&job, nullptr, lines.c_str(), &passed), DKM_OK) << dkm_last_error();
  EXPECT_EQ(passed, 1) << Slurp(lines);
  EXPECT_NE(Slurp(lines).find("PASS overall"), std::string::npos);

  const char* paths[] = {sum_a.c_str()};
  const std::string table = dir + "/capi_report.md";
  ASSERT_EQ(dkm_report(paths, 1, table.c_str()), DKM_OK);
  EXPECT_NE(Slurp(table).find("capi_a"), std::string::npos);

  job.stream_path = "/nonexistent/stream.jsonl";
  EXPECT_EQ(dkm_run(&job, nullptr, nullptr), DKM_ERR_IO);
}

}  // namespace
