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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/variational.hpp"

namespace stretchwalk {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kFlips = 2000;
constexpr std::uint64_t kFlipSeed = 0x5EED0F11F5ULL;

}  // namespace

double AForm::operator()(double n) const {
  switch (kind) {
    case Kind::kPowerOfN: return std::pow(n, param);
    case Kind::kInversePower: return std::pow(n, 1.0 / param);
  }
  return kNaN;
}

double EpsForm::operator()(double a) const {
  switch (kind) {
    case Kind::kConstant: return c;
    case Kind::kInverseLogA: return c / std::log(a);
    case Kind::kPowerOfA: return c * std::pow(a, rate);
    case Kind::kExpDecay: return c * std::exp(-rate * a);
  }
  return kNaN;
}

std::string SequencePlan::describe() const {
  std::ostringstream out;
  out << "a=";
  if (a.kind == AForm::Kind::kPowerOfN) out << "n^" << a.param;
  else out << "n^(1/" << a.param << ")";
  out << " eps=";
  switch (eps.kind) {
    case EpsForm::Kind::kConstant: out << eps.c; break;
    case EpsForm::Kind::kInverseLogA: out << eps.c << "/log(a)"; break;
    case EpsForm::Kind::kPowerOfA: out << eps.c << "*a^" << eps.rate; break;
    case EpsForm::Kind::kExpDecay: out << eps.c << "*exp(-" << eps.rate << "*a)"; break;
  }
  return out.str();
}

std::vector<std::size_t> default_n_grid() {
  std::vector<std::size_t> grid;
  for (int i = 0; i <= 12; ++i)
    grid.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, 1.0 + i / 4.0))));
  return grid;
}

TrendVerdict trend_verdict(const std::vector<std::size_t>& ns,
                           const std::vector<double>& values) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ns.size() && i < values.size(); ++i) {
    if (std::isfinite(values[i]) && values[i] > 0.0) {
      x.push_back(std::log(static_cast<double>(ns[i])));
      y.push_back(std::log(values[i]));
    }
  }
  TrendVerdict v;
  if (x.size() < 3) return v;
  const double m = static_cast<double>(x.size());
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) xbar += x[i], ybar += y[i];
  xbar /= m;
  ybar /= m;
  std::vector<double> terms(x.size());
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    terms[i] = (x[i] - xbar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  double sxy = 0.0;
  for (double t : terms) sxy += t;
  v.slope = sxy / sxx;

  // Null: each term's sign is a fair coin. Count flips at least as extreme
  // as the observed statistic in the direction of the slope.
  RandomStream rng(kFlipSeed);
  std::size_t extreme = 0;
  for (std::size_t f = 0; f < kFlips; ++f) {
    double s = 0.0;
    for (double t : terms) s += rng.uniform() < 0.5 ? -t : t;
    if (v.slope < 0 ? s <= sxy : s >= sxy) ++extreme;
  }
  v.p_value = static_cast<double>(extreme + 1) / static_cast<double>(kFlips + 1);

  bool down = true, up = true;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (!(y[i] < y[i - 1])) down = false;
    if (!(y[i] > y[i - 1])) up = false;
  }
  if (v.p_value < 0.01 && v.slope < 0) v.trend = Trend::kDecreasing;
  if (v.p_value < 0.01 && v.slope > 0) v.trend = Trend::kIncreasing;
  v.monotone = v.slope < 0 ? down : up;
  return v;
}

ConditionReport evaluate_conditions(const ExponentModel& g, const SequencePlan& plan,
                                    const std::vector<std::size_t>& n_grid) {
  require(!n_grid.empty(), ErrorCode::kInvalidArgument, "empty n grid");
  ConditionReport report;
  std::size_t degenerate = 0;
  for (std::size_t n : n_grid) {
    require(n >= 2, ErrorCode::kInvalidArgument, "n grid entries must be >= 2");
    const double nd = static_cast<double>(n);
    ConditionRow row;
    row.n = n;
    row.a = plan.a(nd);
    row.eps = plan.eps(row.a);
    const LocalizationBounds b = closed_form_bounds(g, {n, row.a, row.eps});
    row.H = b.H;
    row.G = b.G;
    row.ratio_growth = g.log_value(row.a) / std::log(nd);
    row.ratio_t1 = nd * std::log(row.a) / std::log(nd);
    if (!(b.H > 0.0) || !std::isfinite(b.H)) {
      row.degenerate = true;
      row.ratio32 = row.ratio33 = kNaN;
      ++degenerate;
    } else {
      row.ratio32 = nd * g.log_value(row.a + row.eps) / b.H;
      row.ratio33 = nd * b.G / b.H;
    }
    report.rows.push_back(row);
  }
  require(10 * degenerate <= report.rows.size(), ErrorCode::kDegeneratePlan,
          "H <= 0 on more than 10% of the plan rows");

  std::vector<std::size_t> ns;
  std::vector<double> r32, r33, growth;
  for (const auto& row : report.rows) {
    ns.push_back(row.n);
    r32.push_back(row.ratio32);
    r33.push_back(row.ratio33);
    growth.push_back(row.ratio_growth);
  }
  report.c32 = trend_verdict(ns, r32);
  report.c33 = trend_verdict(ns, r33);
  const bool positive = std::all_of(growth.begin(), growth.end(),
                                    [](double v) { return v > 0.0; });
  report.growth = positive && trend_verdict(ns, growth).trend != Trend::kDecreasing;
  report.final_ratio32 = report.rows.back().ratio32;
  return report;
}

double admissible_epsilon(const ExponentModel& g, std::size_t n, double a, double target) {
  require(target > 0.0, ErrorCode::kInvalidArgument, "target must be positive");
  auto ratio = [&](double eps) {
    const LocalizationBounds b = closed_form_bounds(g, {n, a, eps});
    if (!(b.H > 0.0)) return std::numeric_limits<double>::infinity();
    return static_cast<double>(n) * g.log_value(a + eps) / b.H;
  };
  double lo = 1e-8 * a, hi = 0.9 * a;
  if (ratio(lo) <= target) return lo;
  require(ratio(hi) <= target, ErrorCode::kNotAchievable,
          "no eps up to 0.9 a meets the target");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

PlanPreset plan_preset(const std::string& name, double beta, double alpha) {
  const double b = beta > 0.0 ? beta : 3.0;
  const double al = alpha > 0.0 ? alpha : 0.5;
  using AK = AForm::Kind;
  using EK = EpsForm::Kind;
  if (name == "example1-case1") {
    return {ExponentModel::power(1.5), {{AK::kPowerOfN, 1.0}, {EK::kPowerOfA, 1.0, 0.1}}};
  }
  if (name == "example1-case2") {
    return {ExponentModel::power(b), {{AK::kInversePower, al}, {EK::kInverseLogA, 1.0, 0.0}}};
  }
  if (name == "example2") {
    return {ExponentModel::exponential(),
            {{AK::kPowerOfN, 0.5}, {EK::kExpDecay, 1.0, 1.0 / 8.0}}};
  }
  if (name == "weibull-corollary") {
    return {ExponentModel::weibull(3.0),
            {{AK::kInversePower, al}, {EK::kInverseLogA, 1.0, 0.0}}};
  }
  fail(ErrorCode::kInvalidArgument, "unknown plan preset '" + name + "'");
}

}  // namespace stretchwalk
