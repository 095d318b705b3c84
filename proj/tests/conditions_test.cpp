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

#include "core/conditions.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "core/errors.hpp"
#include "core/variational.hpp"

namespace stretchwalk {
namespace {

TEST(PlanTest, DefaultGridIsLogSpaced) {
  const auto grid = default_n_grid();
  ASSERT_EQ(grid.size(), 13u);
  EXPECT_EQ(grid.front(), 10u);
  EXPECT_EQ(grid.back(), 10000u);
  EXPECT_EQ(grid[4], 100u);
  EXPECT_EQ(grid[8], 1000u);
}

TEST(PlanTest, FormsEvaluate) {
  EXPECT_DOUBLE_EQ((AForm{AForm::Kind::kInversePower, 0.5})(7.0), 49.0);
  EXPECT_DOUBLE_EQ((AForm{AForm::Kind::kPowerOfN, 0.5})(16.0), 4.0);
  EXPECT_DOUBLE_EQ((EpsForm{EpsForm::Kind::kInverseLogA, 2.0, 0.0})(std::exp(4.0)), 0.5);
  EXPECT_DOUBLE_EQ((EpsForm{EpsForm::Kind::kExpDecay, 1.0, 0.125})(8.0), std::exp(-1.0));
  EXPECT_DOUBLE_EQ((EpsForm{EpsForm::Kind::kPowerOfA, 3.0, 0.5})(4.0), 6.0);
}

TEST(ConditionsTest, CubeWithQuadraticThresholdDecreases) {
  const auto preset = plan_preset("example1-case2", 3.0, 0.5);
  const auto report = evaluate_conditions(preset.g, preset.plan, default_n_grid());
  EXPECT_EQ(report.c32.trend, Trend::kDecreasing);
  EXPECT_EQ(report.c33.trend, Trend::kDecreasing);
  // ratio32 first rises (8.80 at n=10, 10.14 at n=18) before falling.
  EXPECT_FALSE(report.c32.monotone);
  for (std::size_t i = 3; i < report.rows.size(); ++i)
    EXPECT_LT(report.rows[i].ratio32, report.rows[i - 1].ratio32) << report.rows[i].n;
  EXPECT_TRUE(report.c33.monotone);
  EXPECT_TRUE(report.growth);
  // Extended-precision evaluation of the closed forms at n = 10^4.
  EXPECT_NEAR(report.final_ratio32, 0.624990758357704, 1e-9);
  EXPECT_NEAR(report.rows.front().ratio32, 8.799613342849673, 1e-9);
}

TEST(ConditionsTest, SlowExponentWithWideBandIncreases) {
  const auto preset = plan_preset("example1-case1");
  const auto report = evaluate_conditions(preset.g, preset.plan, default_n_grid());
  EXPECT_EQ(report.c32.trend, Trend::kIncreasing);
  EXPECT_TRUE(report.c32.monotone);
}

TEST(ConditionsTest, ExponentialWithFastBandDecreases) {
  const auto preset = plan_preset("example2");
  const auto report = evaluate_conditions(preset.g, preset.plan, default_n_grid());
  EXPECT_EQ(report.c32.trend, Trend::kDecreasing);
  for (std::size_t i = 2; i < report.rows.size(); ++i)
    EXPECT_LT(report.rows[i].ratio32, report.rows[i - 1].ratio32) << report.rows[i].n;
}

TEST(ConditionsTest, WeibullPlanBothRatiosDecrease) {
  const auto preset = plan_preset("weibull-corollary");
  const auto report = evaluate_conditions(preset.g, preset.plan, default_n_grid());
  EXPECT_EQ(report.c32.trend, Trend::kDecreasing);
  EXPECT_EQ(report.c33.trend, Trend::kDecreasing);
}

TEST(ConditionsTest, SubsamplingLeavesRowsUnchanged) {
  const auto preset = plan_preset("example1-case2");
  const auto full = evaluate_conditions(preset.g, preset.plan, default_n_grid());
  const auto part = evaluate_conditions(preset.g, preset.plan, {32, 1000, 5623});
  for (const auto& row : part.rows) {
    bool found = false;
    for (const auto& f : full.rows) {
      if (f.n != row.n) continue;
      found = true;
      EXPECT_EQ(f.ratio32, row.ratio32);
      EXPECT_EQ(f.ratio33, row.ratio33);
      EXPECT_EQ(f.H, row.H);
    }
    EXPECT_TRUE(found) << row.n;
  }
}

TEST(ConditionsTest, GapIsPositiveForStrictlyConvexG) {
  for (const auto& g : {ExponentModel::power(2.0), ExponentModel::exponential(),
                        ExponentModel::weibull(3.0)}) {
    for (double e : {1e-6, 1e-3, 0.5}) {
      EXPECT_GT(closed_form_bounds(g, {50, 3.0, e}).H, 0.0) << g.name() << " eps=" << e;
    }
  }
}

TEST(ConditionsTest, VanishingBandIsDegeneratePlan) {
  const SequencePlan plan{{AForm::Kind::kPowerOfN, 1.0}, {EpsForm::Kind::kExpDecay, 1.0, 50.0}};
  try {
    (void)evaluate_conditions(ExponentModel::power(2.0), plan, default_n_grid());
    FAIL() << "expected DegeneratePlan";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegeneratePlan);
  }
}

TEST(TrendTest, FlatSeriesIsFlat) {
  const std::vector<std::size_t> ns{10, 20, 40, 80, 160};
  const auto v = trend_verdict(ns, {1.0, 1.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(v.trend, Trend::kFlat);
}

TEST(AdmissibleEpsilonTest, HitsTheTarget) {
  const auto g = ExponentModel::power(3.0);
  const double eps = admissible_epsilon(g, 1000, 100.0, 0.1);
  const auto b = closed_form_bounds(g, {1000, 100.0, eps});
  const double ratio = 1000 * std::log(g.value(100.0 + eps)) / b.H;
  EXPECT_GE(ratio, 0.099);
  EXPECT_LE(ratio, 0.101);
}

TEST(AdmissibleEpsilonTest, VacuousTargetGivesSmallestEps) {
  const auto g = ExponentModel::power(3.0);
  EXPECT_DOUBLE_EQ(admissible_epsilon(g, 1000, 100.0, 1e9 * 1e9 * 1e9), 1e-8 * 100.0);
}

TEST(AdmissibleEpsilonTest, TighterTargetNeedsWiderBand) {
  const auto g = ExponentModel::power(3.0);
  EXPECT_GE(admissible_epsilon(g, 1000, 100.0, 0.01), admissible_epsilon(g, 1000, 100.0, 0.1));
}

TEST(AdmissibleEpsilonTest, UnreachableTargetIsNotAchievable) {
  try {
    (void)admissible_epsilon(ExponentModel::power(3.0), 1000, 100.0, 1e-9);
    FAIL() << "expected NotAchievable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAchievable);
  }
}

TEST(PresetTest, UnknownNameIsInvalid) {
  EXPECT_THROW((void)plan_preset("example3"), Error);
}

}  // namespace
}  // namespace stretchwalk
