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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/density.hpp"

namespace stretchwalk {

/// a_n as a function of n.
struct AForm {
  enum class Kind { kPowerOfN, kInversePower };
  Kind kind = Kind::kPowerOfN;
  double param = 1.0;  // gamma in n^gamma, or alpha in n^(1/alpha)

  double operator()(double n) const;
};

/// eps_n as a function of a_n.
struct EpsForm {
  enum class Kind { kConstant, kInverseLogA, kPowerOfA, kExpDecay };
  Kind kind = Kind::kConstant;
  double c = 1.0;
  double rate = 0.0;  // rho for kPowerOfA, kappa for kExpDecay

  double operator()(double a) const;
};

struct SequencePlan {
  AForm a;
  EpsForm eps;
  std::string describe() const;
};

struct ConditionRow {
  std::size_t n = 0;
  double a = 0.0;
  double eps = 0.0;
  double ratio_growth = 0.0;  // log g(a) / log n
  double ratio_t1 = 0.0;      // n log a / log n
  double ratio32 = 0.0;       // n log g(a+eps) / H
  double ratio33 = 0.0;       // n G / H
  double H = 0.0;
  double G = 0.0;
  bool degenerate = false;    // H <= 0; ratios are NaN
};

enum class Trend { kDecreasing, kIncreasing, kFlat };

struct TrendVerdict {
  Trend trend = Trend::kFlat;
  double slope = 0.0;    // OLS slope of log ratio against log n
  double p_value = 1.0;  // one-sided sign-flip p-value in the slope's direction
  bool monotone = false; // strictly monotone in the slope's direction
};

struct ConditionReport {
  std::vector<ConditionRow> rows;
  bool growth = false;
  TrendVerdict c32;
  TrendVerdict c33;
  double final_ratio32 = 0.0;
};

/// 13 log-spaced integers from 10 to 10^4.
std::vector<std::size_t> default_n_grid();

/// Fills one row per n from closed_form_bounds. Throws DegeneratePlan if
/// more than 10% of the rows have H <= 0.
ConditionReport evaluate_conditions(const ExponentModel& g, const SequencePlan& plan,
                                    const std::vector<std::size_t>& n_grid);

/// Trend of log(values) against log(ns) with a 2000-flip sign test at
/// level 0.01. Non-finite entries are skipped.
TrendVerdict trend_verdict(const std::vector<std::size_t>& ns,
                           const std::vector<double>& values);

/// Smallest eps in [1e-8 a, 0.9 a] with n log g(a+eps) / H(a, eps) <= target,
/// by 60 bisection steps. Throws NotAchievable if 0.9 a misses the target.
double admissible_epsilon(const ExponentModel& g, std::size_t n, double a, double target);

/// Named plans bound to their exponent: example1-case1, example1-case2,
/// example2, weibull-corollary. `beta` and `alpha` feed example1-case2
/// (and alpha the corollary); non-positive values keep the defaults 3 and 0.5.
struct PlanPreset {
  ExponentModel g;
  SequencePlan plan;
};
PlanPreset plan_preset(const std::string& name, double beta = 0.0, double alpha = 0.0);

}  // namespace stretchwalk
