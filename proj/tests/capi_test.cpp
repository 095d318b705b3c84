// Copyright 2026 The stretchwalk Authors
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

// Exercises the shared library through its C header only.

#include "stretchwalk/stretchwalk.h"

#include <cmath>
#include <cstring>
#include <string>

#include <gtest/gtest.h>

namespace {

struct ModelHandle {
  sw_model* m = nullptr;
  explicit ModelHandle(const char* spec) { EXPECT_EQ(sw_model_create(spec, &m), SW_OK) << spec; }
  ~ModelHandle() { sw_model_free(m); }
};

TEST(CApiTest, ModelLifecycle) {
  ModelHandle w("weibull:k=3");
  ASSERT_NE(w.m, nullptr);
  EXPECT_STREQ(sw_model_describe(w.m), "weibull(k=3)");
  double mean = 0.0;
  ASSERT_EQ(sw_model_mean(w.m, &mean), SW_OK);
  EXPECT_NEAR(mean, std::tgamma(1.0 + 1.0 / 3.0), 1e-10);
  double ld = 0.0;
  ASSERT_EQ(sw_model_log_density(w.m, 1.0, &ld), SW_OK);
  EXPECT_NEAR(ld, std::log(3.0) - 1.0, 1e-10);
  EXPECT_EQ(sw_model_log_density(w.m, -1.0, &ld), SW_OUT_OF_SUPPORT);
  EXPECT_STREQ(sw_status_name(SW_OUT_OF_SUPPORT), "OutOfSupport");

  ModelHandle j(R"({"kind": "power", "beta": 3, "perturbation": "almost-log-concave"})");
  EXPECT_NE(j.m, nullptr);
}

TEST(CApiTest, ErrorsCarryAThreadLocalMessage) {
  sw_model* m = reinterpret_cast<sw_model*>(0x1);
  EXPECT_EQ(sw_model_create("gamma:k=2", &m), SW_USAGE);
  EXPECT_EQ(m, nullptr);
  EXPECT_NE(std::string(sw_last_error()).find("gamma"), std::string::npos);
  EXPECT_EQ(sw_model_create("{not json", &m), SW_USAGE);
  EXPECT_EQ(sw_model_create(nullptr, &m), SW_INVALID_ARGUMENT);
  EXPECT_EQ(sw_model_mean(nullptr, nullptr), SW_INVALID_ARGUMENT);
  sw_model_free(nullptr);
  sw_path_free(nullptr);
  sw_result_free(nullptr);
}

TEST(CApiTest, BoundsAndRate) {
  ModelHandle sq("power:beta=2");
  sw_bounds b{};
  ASSERT_EQ(sw_bounds_compute(sq.m, 2, 3.0, 0.5, &b), SW_OK);
  EXPECT_DOUBLE_EQ(b.f_g1, 3.5 * 3.5 + 2.5 * 2.5);
  EXPECT_DOUBLE_EQ(b.i_c, 18.0);
  EXPECT_EQ(sw_bounds_compute(sq.m, 1, 3.0, 0.5, &b), SW_INVALID_ARGUMENT);

  ModelHandle e("power:beta=1");
  double rate = 0.0, t = 0.0;
  ASSERT_EQ(sw_rate(e.m, 5.0, &rate, &t), SW_OK);
  EXPECT_NEAR(rate, 4.0 - std::log(5.0), 1e-8);
  EXPECT_NEAR(t, 0.8, 1e-8);
}

TEST(CApiTest, PathsAndSlopes) {
  ModelHandle w("weibull:k=3");
  sw_path* p = nullptr;
  ASSERT_EQ(sw_path_simulate(w.m, 200, 1.3, SW_END_AT_LEAST, 4, &p), SW_OK);
  ASSERT_EQ(sw_path_length(p), 200u);
  const double* inc = sw_path_increments(p);
  const double* sums = sw_path_partial_sums(p);
  double s = 0.0;
  for (size_t i = 0; i < 200; ++i) {
    s += inc[i];
    EXPECT_EQ(sums[i], s);
  }
  EXPECT_GE(sums[199], 260.0);
  double best = 0.0;
  size_t j = 0;
  ASSERT_EQ(sw_path_max_slope(p, 200, &best, &j), SW_OK);
  EXPECT_DOUBLE_EQ(best, sums[199] / 200.0);
  EXPECT_EQ(sw_path_max_slope(p, 0, &best, &j), SW_BAD_WINDOW);
  sw_path_free(p);
  EXPECT_EQ(sw_path_simulate(w.m, 10, 1.3, static_cast<sw_conditioning>(7), 4, &p),
            SW_INVALID_ARGUMENT);
}

TEST(CApiTest, LocalizeIsSeeded) {
  ModelHandle m("power:beta=3");
  sw_estimate a{}, b{};
  ASSERT_EQ(sw_localize(m.m, 5, 3.0, 0.5, SW_METHOD_FIXED_SUM_GIBBS, 800, 11, &a), SW_OK);
  ASSERT_EQ(sw_localize(m.m, 5, 3.0, 0.5, SW_METHOD_FIXED_SUM_GIBBS, 800, 11, &b), SW_OK);
  EXPECT_EQ(a.p_hat, b.p_hat);
  EXPECT_GT(a.p_hat, 0.0);
  EXPECT_LE(a.p_hat, 1.0);
}

TEST(CApiTest, RunReturnsFilesAndSummary) {
  EXPECT_EQ(sw_command_count(), 6u);
  EXPECT_STREQ(sw_command_name(0), "bounds");
  EXPECT_EQ(sw_command_name(6), nullptr);

  sw_result* r = nullptr;
  ASSERT_EQ(sw_run("conditions", R"({"plan": "example2", "seed": 8})", &r), SW_OK);
  ASSERT_EQ(sw_result_file_count(r), 2u);
  EXPECT_STREQ(sw_result_file_name(r, 0), "conditions.csv");
  size_t len = 0;
  const char* data = sw_result_file_data(r, 0, &len);
  ASSERT_GT(len, 9u);
  EXPECT_EQ(std::string(data, 9), "# seed=8\n");
  EXPECT_NE(std::string(sw_result_summary(r)).find("\"plan\""), std::string::npos);
  EXPECT_EQ(sw_result_passed(r), 1);
  EXPECT_EQ(sw_result_file_name(r, 5), nullptr);
  sw_result_free(r);

  EXPECT_EQ(sw_run("conditions", "[1,2]", &r), SW_USAGE);
  EXPECT_EQ(sw_run("dance", nullptr, &r), SW_USAGE);
  EXPECT_EQ(sw_run("rate", R"({"model": "exp", "x": 20})", &r), SW_NO_ROOT);
}

void count_criterion(const sw_criterion* c, void* user) {
  EXPECT_GT(std::strlen(c->title), 0u);
  ++*static_cast<int*>(user);
}

TEST(CApiTest, VerifyStreamsCriteria) {
  int seen = 0;
  sw_result* r = nullptr;
  ASSERT_EQ(sw_verify(R"({"criteria": [3, 6]})", count_criterion, &seen, &r), SW_OK);
  EXPECT_EQ(seen, 2);
  EXPECT_EQ(sw_result_passed(r), 1);
  sw_result_free(r);
}

}  // namespace
