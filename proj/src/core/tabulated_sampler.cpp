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

#include "core/tabulated_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace stretchwalk {
TabulatedSampler::TabulatedSampler(const numerics::LogFn& log_f, double lo,
                                   double hi, std::size_t cells,
                                   double trim_drop, std::size_t trim_scan) {
  require(hi > lo, ErrorCode::kInvalidArgument, "empty sampling range");
  require(cells >= 2, ErrorCode::kInvalidArgument, "need at least two cells");
  require(trim_scan >= 2, ErrorCode::kInvalidArgument, "trim scan needs two points");
  const std::size_t scan_points = trim_scan;

  // Endpoints are nudged inward so densities with a log singularity at the
  // boundary (x^{k-1} at 0) still give finite edge values.
  const double nudge = 1e-12 * (hi - lo);
  auto eval = [&](double x) {
    const double v = log_f(std::clamp(x, lo + nudge, hi - nudge));
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };

  std::vector<double> scan(scan_points + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= scan_points; ++i) {
    scan[i] = eval(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(scan_points));
    peak = std::max(peak, scan[i]);
  }
  require(std::isfinite(peak), ErrorCode::kDivergent,
          "sampling density has no finite peak");
  std::size_t first = 0;
  while (first < scan_points && scan[first] < peak - trim_drop) ++first;
  std::size_t last = scan_points;
  while (last > 0 && scan[last] < peak - trim_drop) --last;
  const double step = (hi - lo) / static_cast<double>(scan_points);
  lo_ = (first == 0) ? lo : lo + step * static_cast<double>(first - 1);
  hi_ = (last == scan_points) ? hi : lo + step * static_cast<double>(last + 1);
  h_ = (hi_ - lo_) / static_cast<double>(cells);
  shift_ = peak;

  f_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) f_[i] = std::exp(eval(node(i)) - shift_);
  mass_.resize(cells);
  cum_.assign(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = std::exp(eval(node(i) + 0.5 * h_) - shift_);
    mass_[i] = h_ / 6.0 * (f_[i] + 4.0 * mid + f_[i + 1]);
    cum_[i + 1] = cum_[i] + mass_[i];
  }
  total_ = cum_.back();
  require(total_ > 0.0, ErrorCode::kDivergent, "sampling density has zero mass");
}

double TabulatedSampler::log_mass() const { return std::log(total_) + shift_; }

double TabulatedSampler::quantile(double u) const {
  const double target = std::clamp(u, 0.0, 1.0) * total_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  std::size_t i = static_cast<std::size_t>(std::distance(cum_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, mass_.size()) - 1;
  if (mass_[i] <= 0.0) return node(i);
  const double r = std::clamp((target - cum_[i]) / mass_[i], 0.0, 1.0);
  const double f0 = f_[i];
  const double f1 = f_[i + 1];
  const double area = 0.5 * (f0 + f1);
  double s;
  if (area <= 0.0) {
    s = r;
  } else {
    // Solve (f1-f0)/2 s^2 + f0 s = r*area in the rationalized form.
    const double disc = f0 * f0 + 2.0 * (f1 - f0) * r * area;
    s = 2.0 * r * area / (f0 + std::sqrt(std::max(disc, 0.0)));
  }
  return node(i) + std::clamp(s, 0.0, 1.0) * h_;
}

double TabulatedSampler::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  std::size_t i = static_cast<std::size_t>((x - lo_) / h_);
  i = std::min(i, mass_.size() - 1);
  const double s = std::clamp((x - node(i)) / h_, 0.0, 1.0);
  const double f0 = f_[i];
  const double f1 = f_[i + 1];
  const double area = 0.5 * (f0 + f1);
  const double frac =
      area > 0.0 ? (f0 * s + 0.5 * (f1 - f0) * s * s) / area : s;
  return (cum_[i] + frac * mass_[i]) / total_;
}

}  // namespace stretchwalk
