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

// Test-only reference computations. These deliberately avoid the library's
// quadrature and sampling code so they can check it independently.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace stretchwalk::testing {

/// Composite Simpson rule with `intervals` (rounded up to even) subintervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      std::size_t intervals = 200000) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double sum = f(lo) + f(hi);
  for (std::size_t i = 1; i < intervals; ++i) {
    const double x = lo + h * static_cast<double>(i);
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
  }
  return sum * h / 3.0;
}

/// Cumulative distribution of an unnormalized density on a uniform grid,
/// by trapezoid cells of width (hi-lo)/cells, normalized to end at 1.
struct GridCdf {
  double lo = 0.0, hi = 0.0;
  std::vector<double> cum;

  GridCdf(const std::function<double(double)>& density, double lo_, double hi_,
          std::size_t cells = 200000)
      : lo(lo_), hi(hi_), cum(cells + 1, 0.0) {
    const double h = (hi - lo) / static_cast<double>(cells);
    double prev = density(lo + 1e-300);
    for (std::size_t i = 1; i <= cells; ++i) {
      const double mid = density(lo + h * (static_cast<double>(i) - 0.5));
      const double cur = density(lo + h * static_cast<double>(i));
      cum[i] = cum[i - 1] + h / 6.0 * (prev + 4.0 * mid + cur);
      prev = cur;
    }
    for (double& c : cum) c /= cum.back();
  }

  double operator()(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / (hi - lo) * static_cast<double>(cum.size() - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), cum.size() - 2);
    const double t = pos - static_cast<double>(i);
    return cum[i] + t * (cum[i + 1] - cum[i]);
  }
};

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_distance(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::fabs(f - static_cast<double>(i) / n),
                  std::fabs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace stretchwalk::testing
