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

#include "core/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace stretchwalk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoxLo = 1e-3;

double log_g(const ExponentModel& g, double x) { return g.log_value(x); }

}  // namespace

void validate_band(const ExponentModel& g, const BandEvent& ev) {
  require(ev.n >= 2, ErrorCode::kInvalidArgument, "band event needs n >= 2");
  require(std::isfinite(ev.a) && std::isfinite(ev.eps), ErrorCode::kInvalidArgument,
          "band event needs finite a and eps");
  require(ev.eps >= 0.0 && ev.eps < ev.a, ErrorCode::kInvalidArgument,
          "band event needs 0 <= eps < a");
  require(ev.a > g.threshold(), ErrorCode::kInvalidArgument,
          "a must exceed the threshold of g (" + std::to_string(g.threshold()) + ")");
}

LocalizationBounds closed_form_bounds(const ExponentModel& g, const BandEvent& ev) {
  validate_band(g, ev);
  const double n = static_cast<double>(ev.n);
  const double a = ev.a;
  const double e = ev.eps;
  const double spread = e / (n - 1.0);
  require(a - spread > 0.0, ErrorCode::kDomainError, "a - eps/(n-1) must be positive");

  LocalizationBounds b;
  b.f_g1 = g.value(a + e) + (n - 1.0) * g.value(a - spread);
  b.f_g2 = g.value(a - e) + (n - 1.0) * g.value(a + spread);
  b.i_icc = std::min(b.f_g1, b.f_g2);
  b.i_c = n * g.value(a);
  // The first-order terms cancel exactly: eps g'(a) - (n-1) spread g'(a) = 0.
  const double h1 = g.remainder(a, e) + (n - 1.0) * g.remainder(a, -spread);
  const double h2 = g.remainder(a, -e) + (n - 1.0) * g.remainder(a, spread);
  b.H = std::min(h1, h2);
  b.G = g.increment(a, 1.0 / g.value(a));
  b.tau = n * b.G;
  return b;
}

double minimizer_profile(const ExponentModel& g, const BandEvent& ev, std::size_t k) {
  validate_band(g, ev);
  require(k >= 1 && k < ev.n, ErrorCode::kInvalidArgument, "profile needs 1 <= k < n");
  const double kk = static_cast<double>(k);
  const double rest = static_cast<double>(ev.n - k);
  const double x0 = ev.a - kk * ev.eps / rest;
  require(x0 > 0.0, ErrorCode::kDomainError, "a - k eps/(n-k) must be positive");
  return kk * g.value(ev.a + ev.eps) + rest * g.value(x0);
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

class BruteForce {
 public:
  BruteForce(const std::function<double(double)>& phi, const BandEvent& ev, Region region)
      : phi_(phi), ev_(ev), region_(region), d_(ev.n - 1) {
    lo_ = kBoxLo;
    hi_ = ev.a + static_cast<double>(ev.n) * ev.eps + 5.0;
    target_ = static_cast<double>(ev.n) * ev.a;
    find_local_minima();
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t free_dims() const { return d_; }

  // Best value of phi on [l, u] from the endpoints and the interior local minima.
  std::pair<double, double> best_on(double l, double u) const {
    if (l > u) return {kInf, l};
    double best = phi_(l), at = l;
    const double vu = phi_(u);
    if (vu < best) best = vu, at = u;
    for (double m : local_minima_) {
      if (m > l && m < u) {
        const double v = phi_(m);
        if (v < best) best = v, at = m;
      }
    }
    return {best, at};
  }

  // Optimal last coordinate given the free ones.
  std::pair<double, double> best_response(double sum, double mx, double mn) const {
    const double l = std::max(lo_, target_ - sum);
    const double upper = ev_.a + ev_.eps;
    const double lower = ev_.a - ev_.eps;
    switch (region_) {
      case Region::kC:
        return best_on(l, hi_);
      case Region::kAcapC:
        return mx >= upper ? best_on(l, hi_) : best_on(std::max(l, upper), hi_);
      case Region::kBcapC:
        return mn <= lower ? best_on(l, hi_) : best_on(l, std::min(hi_, lower));
      case Region::kIccC:
        break;
    }
    fail(ErrorCode::kInternal, "IccC is split before the search");
  }

  double objective(const std::vector<double>& x, double* last = nullptr) const {
    double sum = 0.0, val = 0.0, mx = -kInf, mn = kInf;
    for (double v : x) {
      if (v < lo_ || v > hi_) return kInf;
      sum += v;
      val += phi_(v);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    const auto [best, at] = best_response(sum, mx, mn);
    if (last != nullptr) *last = at;
    return val + best;
  }

  struct Candidate {
    double value;
    std::vector<double> x;
  };

  // Exhaustive search over sorted multi-indices of an m-point axis grid.
  std::vector<Candidate> grid_search(std::size_t m, std::size_t keep) const {
    std::vector<double> nodes(m), node_phi(m);
    for (std::size_t i = 0; i < m; ++i) {
      nodes[i] = lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(m - 1);
      node_phi[i] = phi_(nodes[i]);
    }
    std::vector<Candidate> top;
    std::vector<std::size_t> idx(d_, 0);
    auto consider = [&](double value) {
      if (!(value < kInf)) return;
      if (top.size() == keep && !(value < top.back().value)) return;
      std::vector<double> x(d_);
      for (std::size_t i = 0; i < d_; ++i) x[i] = nodes[idx[i]];
      Candidate c{value, std::move(x)};
      auto pos = std::upper_bound(top.begin(), top.end(), c.value,
                                  [](double v, const Candidate& t) { return v < t.value; });
      top.insert(pos, std::move(c));
      if (top.size() > keep) top.pop_back();
    };
    // Iterative nested loop with idx[0] <= idx[1] <= ... <= idx[d-1].
    std::vector<double> partial_sum(d_ + 1, 0.0), partial_val(d_ + 1, 0.0);
    std::size_t level = 0;
    idx[0] = 0;
    for (;;) {
      partial_sum[level + 1] = partial_sum[level] + nodes[idx[level]];
      partial_val[level + 1] = partial_val[level] + node_phi[idx[level]];
      if (level + 1 < d_) {
        ++level;
        idx[level] = idx[level - 1];
        continue;
      }
      const auto [best, at] =
          best_response(partial_sum[d_], nodes[idx[d_ - 1]], nodes[idx[0]]);
      (void)at;
      consider(partial_val[d_] + best);
      // Advance the odometer.
      for (;;) {
        if (++idx[level] < m) break;
        if (level == 0) return top;
        --level;
      }
    }
  }

  Candidate refine(Candidate c, double step) const {
    const double min_step = 1e-12 * (hi_ - lo_);
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < d_; ++i) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> dir(d_, 0.0);
        dir[i] = sgn;
        dirs.push_back(std::move(dir));
      }
      for (std::size_t j = i + 1; j < d_; ++j) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> dir(d_, 0.0);
          dir[i] = sgn;
          dir[j] = -sgn;
          dirs.push_back(std::move(dir));
        }
      }
    }
    std::vector<double> trial(d_);
    std::size_t evaluations = 0;
    while (step > min_step && evaluations < 2'000'000) {
      bool improved = false;
      for (const auto& dir : dirs) {
        for (std::size_t i = 0; i < d_; ++i) trial[i] = c.x[i] + step * dir[i];
        const double v = objective(trial);
        ++evaluations;
        if (v < c.value) {
          c.value = v;
          c.x = trial;
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    return c;
  }

  BruteForceResult solve(std::size_t m, std::size_t keep) const {
    const double spacing = (hi_ - lo_) / static_cast<double>(m - 1);
    BruteForceResult result{kInf, {}, m};
    for (auto& c : grid_search(m, keep)) {
      const Candidate r = refine(std::move(c), spacing);
      if (r.value < result.value) {
        double last = 0.0;
        result.value = objective(r.x, &last);
        result.argmin = r.x;
        result.argmin.push_back(last);
      }
    }
    return result;
  }

 private:
  void find_local_minima() {
    constexpr std::size_t kScan = 4000;
    std::vector<double> xs(kScan + 1), vs(kScan + 1);
    for (std::size_t i = 0; i <= kScan; ++i) {
      xs[i] = lo_ + (hi_ - lo_) * static_cast<double>(i) / kScan;
      vs[i] = phi_(xs[i]);
    }
    for (std::size_t i = 1; i < kScan; ++i) {
      if (!(vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1])) continue;
      // Golden-section search on the bracketing cells.
      double l = xs[i - 1], u = xs[i + 1];
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = u - ratio * (u - l), d = l + ratio * (u - l);
      double fc = phi_(c), fd = phi_(d);
      for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
          u = d, d = c, fd = fc;
          c = u - ratio * (u - l);
          fc = phi_(c);
        } else {
          l = c, c = d, fc = fd;
          d = l + ratio * (u - l);
          fd = phi_(d);
        }
      }
      local_minima_.push_back(0.5 * (l + u));
    }
  }

  const std::function<double(double)>& phi_;
  BandEvent ev_;
  Region region_;
  std::size_t d_;
  double lo_ = 0.0, hi_ = 0.0, target_ = 0.0;
  std::vector<double> local_minima_;
};

double multiset_count(std::size_t m, std::size_t d) {
  // C(m + d - 1, d)
  double c = 1.0;
  for (std::size_t i = 1; i <= d; ++i)
    c *= static_cast<double>(m + d - i) / static_cast<double>(i);
  return c;
}

BruteForceResult search_region(const std::function<double(double)>& phi,
                               const BandEvent& ev, Region region,
                               const BruteForceOptions& opts) {
  const BruteForce bf(phi, ev, region);
  const std::size_t d = bf.free_dims();
  const auto budget = static_cast<double>(opts.budget);
  std::size_t m = std::max<std::size_t>(opts.base_grid, 8);
  while (m > 8 && multiset_count(m, d) > budget) m /= 2;

  BruteForceResult coarse = bf.solve(std::max<std::size_t>(m / 2, 4), opts.candidates);
  for (std::size_t level = 0; level < opts.max_levels; ++level) {
    require(multiset_count(m, d) <= budget, ErrorCode::kNoConvergence,
            "brute force grid exceeds its evaluation budget before converging");
    BruteForceResult fine = bf.solve(m, opts.candidates);
    const bool both_infinite = !(fine.value < kInf) && !(coarse.value < kInf);
    if (both_infinite) return fine;
    const double scale = std::max(std::fabs(fine.value), 1e-300);
    if (std::fabs(fine.value - coarse.value) <= opts.rel_tol * scale) {
      return fine.value <= coarse.value ? fine : coarse;
    }
    coarse = std::move(fine);
    m *= 2;
  }
  fail(ErrorCode::kNoConvergence, "brute force value unstable under grid halving");
}

}  // namespace

BruteForceResult brute_force_infimum(const std::function<double(double)>& phi,
                                     const BandEvent& ev, Region region,
                                     const BruteForceOptions& opts) {
  require(ev.n >= 2 && ev.n <= 8, ErrorCode::kInvalidArgument,
          "brute force supports 2 <= n <= 8");
  require(ev.eps >= 0.0 && ev.eps < ev.a, ErrorCode::kInvalidArgument,
          "band event needs 0 <= eps < a");
  if (region != Region::kIccC) return search_region(phi, ev, region, opts);
  BruteForceResult a = search_region(phi, ev, Region::kAcapC, opts);
  BruteForceResult b = search_region(phi, ev, Region::kBcapC, opts);
  return a.value <= b.value ? a : b;
}

BruteForceResult brute_force_infimum(const PerturbedDensity& model, const BandEvent& ev,
                                     Region region, const BruteForceOptions& opts) {
  validate_band(model.base(), ev);
  return brute_force_infimum([&model](double x) { return model.phi(x); }, ev, region,
                             opts);
}

// ---------------------------------------------------------------------------
// Minorant

PiecewiseMinorant::PiecewiseMinorant(ExponentModel g, double N, double y0, double y1,
                                     double y2, double y3)
    : g_(std::move(g)), N_(N), y0_(y0), y1_(y1), y2_(y2), y3_(y3) {}

double PiecewiseMinorant::r(double x) const { return g_.value(x) - N_ * log_g(g_, x); }

double PiecewiseMinorant::r_d1(double x) const {
  return g_.d1(x) * (1.0 - N_ / g_.value(x));
}

double PiecewiseMinorant::s(double x) const { return r(y3_) + r_d1(y3_) * (x - y3_); }

PiecewiseMinorant convex_minorant(const ExponentModel& g,
                                  const std::function<double(double)>& M, double N,
                                  double x_max, std::size_t points) {
  require(N > 0.0 && std::isfinite(N), ErrorCode::kInvalidArgument,
          "minorant needs an envelope constant N > 0");
  require(points >= 16, ErrorCode::kInvalidArgument, "minorant grid too small");
  if (!(x_max > 0.0)) x_max = g.inverse(1000.0);
  const double X = g.threshold();

  std::vector<double> x(points), gv(points), lg(points), mv(points);
  for (std::size_t i = 0; i < points; ++i) {
    x[i] = x_max * static_cast<double>(i + 1) / static_cast<double>(points);
    gv[i] = g.value(x[i]);
    lg[i] = log_g(g, x[i]);
    mv[i] = M(x[i]);
  }

  // y0: the envelope inequality holds from here to the end of the grid.
  std::size_t i0 = points;
  while (i0 > 0 && mv[i0 - 1] <= N * lg[i0 - 1] + 1e-12) --i0;
  require(i0 < points, ErrorCode::kEnvelopeViolated,
          "M <= N log g fails at the end of the probe grid");

  // y1: from here on g > N, r' > 0 and r'' > 0, and x >= X.
  std::size_t i1 = points;
  while (i1 > 0) {
    const std::size_t j = i1 - 1;
    const double gp = g.d1(x[j]);
    const double rp = gp * (1.0 - N / gv[j]);
    const double rpp = g.d2(x[j]) * (1.0 - N / gv[j]) + N * gp * gp / (gv[j] * gv[j]);
    if (!(x[j] >= X && gv[j] > N && rp > 0.0 && rpp > 0.0)) break;
    --i1;
  }
  require(i1 < points, ErrorCode::kThresholdNotFound, "no grid point qualifies as y1");

  // y2: past y0 and y1, with M below N log g(y2) everywhere to its left.
  std::size_t i2 = std::max(i0, i1);
  double running = 0.0;
  for (std::size_t j = 0; j < i2; ++j) running = std::max(running, mv[j]);
  while (i2 < points && running > N * lg[i2]) {
    running = std::max(running, mv[i2]);
    ++i2;
  }
  require(i2 < points, ErrorCode::kThresholdNotFound, "no grid point qualifies as y2");

  const double gp2 = g.d1(x[i2]);
  std::size_t i3 = i2;
  while (i3 < points && !(g.d1(x[i3]) > 2.0 * gp2 && gv[i3] > 2.0 * N)) ++i3;
  require(i3 < points, ErrorCode::kThresholdNotFound,
          "y3 lies beyond the tabulated range");

  return PiecewiseMinorant(g, N, x[i0], x[i1], x[i2], x[i3]);
}

PiecewiseMinorant convex_minorant(const PerturbedDensity& model, double x_max,
                                  std::size_t points) {
  require(model.perturbed(), ErrorCode::kInvalidArgument,
          "minorant needs a perturbed model");
  return convex_minorant(
      model.base(), [&model](double x) { return model.envelope(x); },
      model.envelope_constant(), x_max, points);
}

// ---------------------------------------------------------------------------
// Probability bounds

std::pair<double, double> ic_interval(const PerturbedDensity& model, const BandEvent& ev) {
  const ExponentModel& g = model.base();
  validate_band(g, ev);
  const double n = static_cast<double>(ev.n);
  if (!model.perturbed()) return {n * g.value(ev.a), n * g.value(ev.a)};
  const PiecewiseMinorant m = convex_minorant(model);
  return {n * m.h(ev.a), n * g.value(ev.a) + n * model.envelope_constant() * log_g(g, ev.a)};
}

double log_prob_c_lower(const PerturbedDensity& model, const BandEvent& ev) {
  const ExponentModel& g = model.base();
  validate_band(g, ev);
  const double n = static_cast<double>(ev.n);
  const double a = ev.a;
  const double ga = g.value(a);
  const double big_g = g.increment(a, 1.0 / ga);
  if (!model.perturbed()) {
    return n * model.log_c() - n * ga - n * big_g - n * log_g(g, a);
  }
  const PiecewiseMinorant m = convex_minorant(model);
  require(a > std::max({g.threshold(), m.y3(), m.y0()}), ErrorCode::kDomainError,
          "a must exceed the minorant knot y3 and the envelope threshold y0");
  const double N = m.N();
  const double tau = n * big_g + n * N * log_g(g, a) + n * N * log_g(g, a + 1.0 / ga);
  return n * model.log_c() - n * m.h(a) - tau - n * log_g(g, a);
}

double log_prob_icc_upper(const PerturbedDensity& model, const BandEvent& ev) {
  const ExponentModel& g = model.base();
  const LocalizationBounds b = closed_form_bounds(g, ev);
  const double n = static_cast<double>(ev.n);
  if (!model.perturbed()) {
    const double I = b.i_icc;
    require(I > 0.0, ErrorCode::kDomainError, "I(Icc and C) must be positive");
    return n * model.log_c() - I + n * std::log(I) + std::log(n + 1.0);
  }
  const PiecewiseMinorant m = convex_minorant(model);
  require(ev.a > std::max(g.threshold(), m.y3()), ErrorCode::kDomainError,
          "a must exceed the minorant knot y3");
  const double N = m.N();
  const double i_low = b.i_icc - n * N * log_g(g, ev.a + ev.eps);
  const double i_up = b.i_icc + n * N * log_g(g, ev.a + ev.eps / (n - 1.0));
  require(i_up > 0.0, ErrorCode::kDomainError, "I(Icc and C) must be positive");
  return n * model.log_c() - i_low + n * std::log(i_up) + std::log(n + 1.0) +
         n * std::log(2.0);
}

}  // namespace stretchwalk
