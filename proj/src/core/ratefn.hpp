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

#include "core/density.hpp"

namespace stretchwalk {

/// Cumulant generating function Lambda(t) = log E exp(tX) together with the
/// mean and variance of the tilted law, i.e. Lambda'(t) and Lambda''(t).
struct TiltedMoments {
  double log_mgf;
  double mean;
  double variance;
};

/// One quadrature pass over (0, cap(t)], where cap(t) is pushed out until
/// the tilted integrand has dropped 60 nats below its peak. Throws Divergent
/// when no such cap exists (t >= 1 for the pure exponential).
TiltedMoments tilted_moments(const PerturbedDensity& model, double t);

double log_mgf(const PerturbedDensity& model, double t);

struct RatePoint {
  double x;
  double rate;    // I(x)
  double t_star;  // maximizer of t x - Lambda(t)
};

/// Legendre transform at x > 0 by safeguarded Newton on Lambda'(t) = x.
/// The bracket grows geometrically from t = 0 and halves its step when a
/// trial t makes the MGF diverge. Throws NoRoot if |t| would exceed 1e6.
RatePoint cramer_rate(const PerturbedDensity& model, double x);

/// t with tilted mean a.
double tilt_for_mean(const PerturbedDensity& model, double a);

/// I on a log-spaced grid above the mean, with cubic Hermite interpolation
/// that uses t* as the slope at every node.
class RateTable {
 public:
  /// 128 nodes from 1.05 E X to x_max.
  static RateTable build(const PerturbedDensity& model, double x_max,
                         std::size_t points = 128);

  /// Appends nodes at the same log spacing until x_max is covered.
  void extend_to(double x_max);

  /// Interpolated I(x) and t*(x); DomainError outside [x_min, x_max].
  double rate(double x) const;
  double t_star(double x) const;

  const std::vector<RatePoint>& nodes() const { return nodes_; }
  double x_min() const { return nodes_.front().x; }
  double x_max() const { return nodes_.back().x; }

 private:
  RateTable(PerturbedDensity model, double ratio) : model_(std::move(model)), ratio_(ratio) {}
  std::size_t locate(double x) const;

  PerturbedDensity model_;
  double ratio_;
  std::vector<RatePoint> nodes_;
};

/// Checks performed on a finished table.
struct RateTableAudit {
  bool convex = false;             // second differences of I >= -1e-8
  bool nonnegative = false;
  bool t_star_monotone = false;
  double rate_at_mean = 0.0;       // direct I(E X)
  double max_duality_error = 0.0;  // |t* x - Lambda(t*) - I| and |Lambda'(t*) - x|
  double max_derivative_error = 0.0;  // |central difference of I - t*|
};
RateTableAudit audit(const PerturbedDensity& model, const RateTable& table);

/// (-log P(X > x)) / I(x), both by quadrature.
double tail_equivalence(const PerturbedDensity& model, double x);

/// -n I(a), the first-order approximation of log P(S_n / n > a).
double extended_ldp_log_prob(const PerturbedDensity& model, std::size_t n, double a);

}  // namespace stretchwalk
