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

#include "core/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace stretchwalk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxTilt = 1e6;

double newton_tolerance(double x) { return 1e-11 * std::max(1.0, x); }

}  // namespace

TiltedMoments tilted_moments(const PerturbedDensity& model, double t) {
  auto log_f = [&model, t](double x) { return model.log_density_unchecked(x) + t * x; };
  const double cap = numerics::tail_cut(log_f, 0.0, model.support_cap());
  const auto m = numerics::log_moments(log_f, 0.0, cap);
  return {m.log_mass, m.mean, m.variance};
}

double log_mgf(const PerturbedDensity& model, double t) {
  if (t == 0.0) return 0.0;
  return tilted_moments(model, t).log_mgf;
}

RatePoint cramer_rate(const PerturbedDensity& model, double x) {
  require(x > 0.0 && std::isfinite(x), ErrorCode::kDomainError,
          "rate function needs x > 0");
  const double tol = newton_tolerance(x);
  TiltedMoments at = tilted_moments(model, 0.0);
  double t = 0.0;
  if (std::fabs(at.mean - x) <= tol) return {x, 0.0, 0.0};

  // Bracket [lo, hi] with Lambda'(lo) < x < Lambda'(hi).
  const bool up = x > at.mean;
  double lo = up ? 0.0 : -kInf;
  double hi = up ? kInf : 0.0;
  TiltedMoments lo_m = at, hi_m = at;
  double step = 1.0;
  double wall = up ? kInf : -kInf;  // nearest t known to diverge
  for (int it = 0;; ++it) {
    require(it < 400, ErrorCode::kNoRoot, "tilt bracket did not close");
    const double base = up ? lo : hi;
    double trial = up ? base + step : base - step;
    if (std::isfinite(wall)) {
      const double room = std::fabs(wall - base) / 2.0;
      trial = up ? base + std::min(step, room) : base - std::min(step, room);
    }
    require(std::fabs(trial) <= kMaxTilt, ErrorCode::kNoRoot,
            "no tilt with |t| <= 1e6 reaches the requested mean");
    TiltedMoments m;
    try {
      m = tilted_moments(model, trial);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDivergent) throw;
      wall = trial;
      continue;
    }
    if (up ? m.mean > x : m.mean < x) {
      (up ? hi : lo) = trial;
      (up ? hi_m : lo_m) = m;
      break;
    }
    (up ? lo : hi) = trial;
    (up ? lo_m : hi_m) = m;
    step *= 2.0;
  }

  // Newton from the end nearer in mean, bisecting whenever a step leaves
  // the bracket or fails to shrink the residual.
  t = std::fabs(lo_m.mean - x) < std::fabs(hi_m.mean - x) ? lo : hi;
  at = t == lo ? lo_m : hi_m;
  for (int it = 0; it < 200; ++it) {
    const double resid = at.mean - x;
    if (std::fabs(resid) <= tol) break;
    (resid < 0.0 ? lo : hi) = t;
    double next = t - resid / at.variance;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(t)) break;
    TiltedMoments m = tilted_moments(model, next);
    if (std::fabs(m.mean - x) > 0.5 * std::fabs(resid)) {
      (m.mean < x ? lo : hi) = next;
      next = 0.5 * (lo + hi);
      m = tilted_moments(model, next);
    }
    t = next;
    at = m;
  }
  require(std::fabs(at.mean - x) <= 1e-8 * std::max(1.0, x), ErrorCode::kNoRoot,
          "Newton iteration on the tilted mean stalled");
  return {x, std::max(0.0, t * x - at.log_mgf), t};
}

double tilt_for_mean(const PerturbedDensity& model, double a) {
  return cramer_rate(model, a).t_star;
}

// ---------------------------------------------------------------------------
// RateTable

RateTable RateTable::build(const PerturbedDensity& model, double x_max, std::size_t points) {
  require(points >= 4, ErrorCode::kInvalidArgument, "rate table needs at least 4 nodes");
  const double x_min = 1.05 * model.mean();
  require(x_max > x_min, ErrorCode::kDomainError, "rate table range is empty");
  const double ratio = std::pow(x_max / x_min, 1.0 / static_cast<double>(points - 1));
  RateTable table(model, ratio);
  table.nodes_.resize(points);
  numerics::parallel_for(points, [&](std::size_t i) {
    const double x = i + 1 == points ? x_max : x_min * std::pow(ratio, static_cast<double>(i));
    table.nodes_[i] = cramer_rate(table.model_, x);
  });
  return table;
}

void RateTable::extend_to(double x_max) {
  while (nodes_.back().x < x_max) {
    nodes_.push_back(cramer_rate(model_, nodes_.back().x * ratio_));
  }
}

std::size_t RateTable::locate(double x) const {
  require(x >= x_min() && x <= x_max(), ErrorCode::kDomainError,
          "x outside the rate table; extend it first");
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                                   [](double v, const RatePoint& p) { return v < p.x; });
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  return std::min(i == 0 ? 0 : i - 1, nodes_.size() - 2);
}

double RateTable::rate(double x) const {
  const std::size_t i = locate(x);
  const RatePoint& p = nodes_[i];
  const RatePoint& q = nodes_[i + 1];
  const double h = q.x - p.x;
  const double s = (x - p.x) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * p.rate + h10 * h * p.t_star + h01 * q.rate + h11 * h * q.t_star;
}

double RateTable::t_star(double x) const {
  // Derivative of the Hermite cubic.
  const std::size_t i = locate(x);
  const RatePoint& p = nodes_[i];
  const RatePoint& q = nodes_[i + 1];
  const double h = q.x - p.x;
  const double s = (x - p.x) / h;
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -d00;
  const double d11 = 3 * s * s - 2 * s;
  return (d00 * p.rate + d01 * q.rate) / h + d10 * p.t_star + d11 * q.t_star;
}

RateTableAudit audit(const PerturbedDensity& model, const RateTable& table) {
  const auto& nodes = table.nodes();
  RateTableAudit out;
  out.convex = true;
  out.nonnegative = true;
  out.t_star_monotone = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].rate < 0.0) out.nonnegative = false;
    if (i > 0 && nodes[i].t_star < nodes[i - 1].t_star) out.t_star_monotone = false;
    if (i > 0 && i + 1 < nodes.size()) {
      // Second divided difference on the uneven grid.
      const double l = (nodes[i].rate - nodes[i - 1].rate) / (nodes[i].x - nodes[i - 1].x);
      const double r = (nodes[i + 1].rate - nodes[i].rate) / (nodes[i + 1].x - nodes[i].x);
      if (r - l < -1e-8) out.convex = false;
    }
  }
  out.rate_at_mean = cramer_rate(model, model.mean()).rate;

  std::vector<double> duality(nodes.size()), derivative(nodes.size());
  numerics::parallel_for(nodes.size(), [&](std::size_t i) {
    const RatePoint& p = nodes[i];
    const TiltedMoments m = tilted_moments(model, p.t_star);
    duality[i] = std::max(std::fabs(p.t_star * p.x - m.log_mgf - p.rate),
                          std::fabs(m.mean - p.x));
    const double h = 1e-4 * p.x;
    const double fd = (cramer_rate(model, p.x + h).rate - cramer_rate(model, p.x - h).rate) /
                      (2.0 * h);
    derivative[i] = std::fabs(fd - p.t_star);
  });
  out.max_duality_error = *std::max_element(duality.begin(), duality.end());
  out.max_derivative_error = *std::max_element(derivative.begin(), derivative.end());
  return out;
}

double tail_equivalence(const PerturbedDensity& model, double x) {
  require(x > 0.0, ErrorCode::kDomainError, "tail ratio needs x > 0");
  auto log_f = [&model](double y) { return model.log_density_unchecked(y); };
  const double hi = numerics::tail_cut(log_f, x, 2.0 * std::max(x, 1.0));
  const double log_tail = numerics::log_integrate_exp(log_f, x, hi);
  return -log_tail / cramer_rate(model, x).rate;
}

double extended_ldp_log_prob(const PerturbedDensity& model, std::size_t n, double a) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  return -static_cast<double>(n) * cramer_rate(model, a).rate;
}

}  // namespace stretchwalk
