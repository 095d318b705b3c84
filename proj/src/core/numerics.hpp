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
#include <functional>

namespace stretchwalk::numerics {

using LogFn = std::function<double(double)>;

struct LogQuadOptions {
  int panels = 128;
  double rel_tol = 1e-13;
  int max_depth = 12;
};

/// log of the integral of exp(log_f) over [lo, hi].
///
/// The integrand is shifted by its maximum over a panel grid before
/// exponentiation, so results far outside double range (e.g. -8000) are
/// representable. Each panel is integrated with adaptive Gauss-Kronrod.
/// Returns -inf when the integrand vanishes on the whole range.
double log_integrate_exp(const LogFn& log_f, double lo, double hi,
                         const LogQuadOptions& opts = {});

/// Tilted moments of exp(log_f) over [lo, hi]: log mass, mean and variance.
struct LogMoments {
  double log_mass;
  double mean;
  double variance;
};
LogMoments log_moments(const LogFn& log_f, double lo, double hi,
                       const LogQuadOptions& opts = {});

/// Smallest point of the doubling sequence start, 2*start, ... at which
/// log_f has fallen `drop` nats below its running maximum and is still
/// decreasing. Throws Divergent once the sequence passes `limit`.
double tail_cut(const LogFn& log_f, double lo, double start, double drop = 60.0,
                double limit = 1e12);

// Cancellation-free remainders, exact to a few ulps for small arguments.

/// (1+u)^beta - 1 - beta*u, u > -1.
double pow1p_remainder(double beta, double u);
/// exp(d) - 1 - d.
double expm1_remainder(double d);
/// log(1+u) - u, u > -1.
double log1p_remainder(double u);

/// log(exp(a) - exp(b)) for a >= b.
double log_diff_exp(double a, double b);
/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

/// Runs body(i) for i in [0, count). Worker count is capped by the
/// STRETCHWALK_THREADS environment variable (default: hardware threads).
/// body must only write to per-index state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Worker count honoured by parallel_for.
unsigned max_threads();

}  // namespace stretchwalk::numerics
