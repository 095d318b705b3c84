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

#include "core/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core/errors.hpp"

namespace stretchwalk::numerics {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Panels whose sampled log-integrand sits this far below the global peak
// contribute less than exp(-120) relative and are skipped.
constexpr double kPanelSkip = 120.0;

struct PanelGrid {
  std::vector<double> nodes;  // 2*panels+1 points: edges and midpoints
  std::vector<double> values;
  double peak = kNegInf;
  double peak_x = 0.0;
};

PanelGrid scan(const LogFn& log_f, double lo, double hi, int panels) {
  PanelGrid grid;
  const int count = 2 * panels + 1;
  grid.nodes.resize(count);
  grid.values.resize(count);
  for (int i = 0; i < count; ++i) {
    const double x = (i == count - 1) ? hi : lo + (hi - lo) * i / (count - 1);
    grid.nodes[i] = x;
    double v = log_f(x);
    if (std::isnan(v)) v = kNegInf;
    grid.values[i] = v;
    if (v > grid.peak) {
      grid.peak = v;
      grid.peak_x = x;
    }
  }
  return grid;
}

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double bisect_until(F& f, double a, double b, double estimate, double err, double tol,
                    int depth) {
  if (err <= tol || depth <= 0) return estimate;
  const double mid = 0.5 * (a + b);
  double el = 0.0, er = 0.0;
  const double left = Kronrod::integrate(f, a, mid, 0, 0.0, &el);
  const double right = Kronrod::integrate(f, mid, b, 0, 0.0, &er);
  return bisect_until(f, a, mid, left, el, 0.5 * tol, depth - 1) +
         bisect_until(f, mid, b, right, er, 0.5 * tol, depth - 1);
}

// Error control is absolute, scaled by the L1 norm of the whole integrand,
// so integrands that change sign (centred moments) do not force panels to
// resolve their own near-zero values to full relative precision.
template <class F>
double integrate_panels(const PanelGrid& grid, int panels, F&& weighted,
                        const LogQuadOptions& opts) {
  struct Panel {
    double a, b, value, err;
  };
  std::vector<Panel> active;
  double l1 = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double local = std::max({grid.values[2 * p], grid.values[2 * p + 1],
                                   grid.values[2 * p + 2]});
    if (local < grid.peak - kPanelSkip) continue;
    Panel pn{grid.nodes[2 * p], grid.nodes[2 * p + 2], 0.0, 0.0};
    double panel_l1 = 0.0;
    pn.value = Kronrod::integrate(weighted, pn.a, pn.b, 0, 0.0, &pn.err, &panel_l1);
    l1 += panel_l1;
    active.push_back(pn);
  }
  if (active.empty()) return 0.0;
  // The per-panel |K - G| estimate grossly overstates the GK31 error on
  // smooth panels, so the budget is not split across panels.
  const double tol = opts.rel_tol * l1;
  double total = 0.0;
  for (const Panel& pn : active)
    total += bisect_until(weighted, pn.a, pn.b, pn.value, pn.err, tol, opts.max_depth);
  return total;
}

}  // namespace

double log_integrate_exp(const LogFn& log_f, double lo, double hi,
                         const LogQuadOptions& opts) {
  if (!(hi > lo)) return kNegInf;
  const PanelGrid grid = scan(log_f, lo, hi, opts.panels);
  if (!std::isfinite(grid.peak)) {
    if (grid.peak > 0) fail(ErrorCode::kDivergent, "integrand overflows");
    return kNegInf;
  }
  const double shift = grid.peak;
  auto f = [&](double x) {
    const double v = log_f(x) - shift;
    return std::isnan(v) ? 0.0 : std::exp(v);
  };
  const double total = integrate_panels(grid, opts.panels, f, opts);
  if (!(total > 0.0)) return kNegInf;
  return std::log(total) + shift;
}

LogMoments log_moments(const LogFn& log_f, double lo, double hi,
                       const LogQuadOptions& opts) {
  const PanelGrid grid = scan(log_f, lo, hi, opts.panels);
  if (!std::isfinite(grid.peak))
    fail(ErrorCode::kDivergent, "tilted integrand has no finite mass");
  const double shift = grid.peak;
  const double ref = grid.peak_x;
  auto base = [&](double x) {
    const double v = log_f(x) - shift;
    return std::isnan(v) ? 0.0 : std::exp(v);
  };
  const double m0 = integrate_panels(grid, opts.panels, base, opts);
  const double m1 = integrate_panels(
      grid, opts.panels, [&](double x) { return (x - ref) * base(x); }, opts);
  const double centre = m1 / m0;
  const double m2 = integrate_panels(
      grid, opts.panels,
      [&](double x) {
        const double d = x - ref - centre;
        return d * d * base(x);
      },
      opts);
  return {std::log(m0) + shift, ref + centre, m2 / m0};
}

double tail_cut(const LogFn& log_f, double lo, double start, double drop,
                double limit) {
  double peak = kNegInf;
  double prev_hi = lo;
  double x = std::max(start, lo + 1e-3);
  constexpr int kScanPerStep = 32;
  while (x <= limit) {
    // Running maximum over (prev_hi, x].
    for (int i = 1; i <= kScanPerStep; ++i) {
      const double y = prev_hi + (x - prev_hi) * i / kScanPerStep;
      const double v = log_f(y);
      if (v > peak) peak = v;
    }
    const double at = log_f(x);
    const double before = log_f(prev_hi + 0.75 * (x - prev_hi));
    if (std::isfinite(peak) && at < peak - drop && at < before) return x;
    prev_hi = x;
    x *= 2.0;
  }
  fail(ErrorCode::kDivergent,
       "integrand tail does not vanish below x=" + std::to_string(limit));
}

double pow1p_remainder(double beta, double u) {
  if (std::fabs(u) >= 0.5) return std::expm1(beta * std::log1p(u)) - beta * u;
  double coeff = beta * (beta - 1.0) / 2.0;
  double power = u * u;
  double sum = 0.0;
  for (int j = 2; j < 400; ++j) {
    const double term = coeff * power;
    sum += term;
    if (term == 0.0 || std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
    coeff *= (beta - j) / (j + 1.0);
    power *= u;
  }
  return sum;
}

double expm1_remainder(double d) {
  if (std::fabs(d) >= 0.5) return std::expm1(d) - d;
  double term = d * d / 2.0;
  double sum = 0.0;
  for (int j = 2; j < 60; ++j) {
    sum += term;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
    term *= d / (j + 1.0);
  }
  return sum;
}

double log1p_remainder(double u) {
  if (std::fabs(u) >= 0.5) return std::log1p(u) - u;
  double power = u * u;
  double sum = 0.0;
  for (int j = 2; j < 400; ++j) {
    const double term = ((j % 2 == 0) ? -1.0 : 1.0) * power / j;
    sum += term;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
    power *= u;
  }
  return sum;
}

double log_diff_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

unsigned max_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STRETCHWALK_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(max_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stretchwalk::numerics
