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
#include <vector>

#include "core/numerics.hpp"
#include "core/rng.hpp"

namespace stretchwalk {

/// Inverse-CDF sampler for an unnormalized log-density on [lo, hi].
///
/// The range is first trimmed to where the density is within `trim_drop`
/// nats of its peak (located on a `trim_scan`-point grid), then split into `cells` equal cells. Cell masses use
/// Simpson's rule; inside a cell the density is treated as linear, which
/// makes inversion a closed-form quadratic solve.
class TabulatedSampler {
 public:
  TabulatedSampler(const numerics::LogFn& log_f, double lo, double hi,
                   std::size_t cells, double trim_drop = 50.0,
                   std::size_t trim_scan = 2048);

  double quantile(double u) const;
  double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

  /// Table CDF at x (0 below the trimmed range, 1 above).
  double cdf(double x) const;
  /// Normalized table density at node i.
  double node_density(std::size_t i) const { return f_[i] / total_; }
  double node(std::size_t i) const { return lo_ + h_ * static_cast<double>(i); }
  std::size_t cells() const { return mass_.size(); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// log of the unnormalized mass, in the caller's log_f units.
  double log_mass() const;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  double h_ = 0.0;
  double shift_ = 0.0;
  double total_ = 0.0;
  std::vector<double> f_;     // shifted density at cell edges
  std::vector<double> mass_;  // per-cell mass
  std::vector<double> cum_;   // cumulative mass at cell edges
};

}  // namespace stretchwalk
