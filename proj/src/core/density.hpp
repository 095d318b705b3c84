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
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace stretchwalk {

// ---------------------------------------------------------------------------
// Convex exponents g, with p(x) proportional to exp(-g(x)) on (0, inf).

/// g(x) = x^beta. beta = 1 (pure exponential) is accepted as a boundary case
/// even though it is not superlinear.
struct PowerExponent {
  double beta;
};

/// g(x) = exp(x).
struct ExpExponent {};

/// g(x) = x^k - (k-1) log x, the exponent of the unit-scale Weibull density
/// k x^{k-1} exp(-x^k).
struct WeibullExponent {
  double k;
};

/// User grid of (x, g) with derivatives by central differences. Outside the
/// grid g is continued by its second-order Taylor polynomial at the end node.
struct TabulatedExponent {
  std::vector<double> x, g, d1, d2;
};

class ExponentModel {
 public:
  using Kind =
      std::variant<PowerExponent, ExpExponent, WeibullExponent, TabulatedExponent>;

  static ExponentModel power(double beta);
  static ExponentModel exponential();
  static ExponentModel weibull(double k);
  static ExponentModel tabulated(std::span<const double> x,
                                 std::span<const double> g);

  double value(double x) const;
  /// log g(x), computed without overflow for the exponential kind.
  double log_value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  /// g(x+d) - g(x) without cancellation.
  double increment(double x, double d) const;
  /// g(x+d) - g(x) - g'(x) d without cancellation.
  double remainder(double x, double d) const;

  /// Point beyond which g is increasing.
  double threshold() const { return threshold_; }
  /// Smallest x >= threshold() with g(x) >= level.
  double inverse(double level) const;

  const Kind& kind() const { return kind_; }
  std::string name() const;
  bool is_weibull() const { return std::holds_alternative<WeibullExponent>(kind_); }

 private:
  explicit ExponentModel(Kind kind);

  Kind kind_;
  double threshold_ = 0.0;
};

/// Results of probing the convexity, monotonicity and superlinearity
/// invariants of an exponent on a dense grid over [X, x_max].
struct ExponentInvariants {
  bool convex = false;
  bool increasing = false;
  bool superlinear = false;
};
ExponentInvariants probe_invariants(const ExponentModel& g, double x_max,
                                    std::size_t points = 10000);

// ---------------------------------------------------------------------------
// Bounded perturbations q with envelope |q| <= M and M <= N log g beyond y0.

struct NoPerturbation {};

/// q(x) = lambda sin(x) m(x), M(x) = |lambda| m(x), N = |lambda|, with
/// m(x) = clamp(log g(x), 0, 1). Requires |lambda| <= 1.
struct SinPerturbation {
  double lambda;
};

/// q(x) = -log c(x) with c(x) = 1 + sin(x)^2 / 2, so M = log(3/2), N = 1.
struct AlmostLogConcavePerturbation {};

/// Tabulated q with linear interpolation (zero outside the grid).
struct TabulatedPerturbation {
  std::vector<double> x, q;
};

using Perturbation = std::variant<NoPerturbation, SinPerturbation,
                                  AlmostLogConcavePerturbation, TabulatedPerturbation>;

struct Normalization {
  double c;
  double log_c;
  double support_cap;
  double log_tail_mass;  // log of the mass beyond support_cap, after scaling by c
};

/// Normalizing constant of exp(-(g+q)) on (0, inf), by adaptive quadrature
/// over (0, support_cap] where g+q has risen 100 nats above its minimum.
Normalization normalize(const ExponentModel& g, const Perturbation& q);

/// Density c exp(-(g+q)) on (0, inf).
class PerturbedDensity {
 public:
  static PerturbedDensity create(ExponentModel base,
                                 Perturbation q = NoPerturbation{});

  const ExponentModel& base() const { return base_; }
  const Perturbation& perturbation() const { return q_; }
  bool perturbed() const { return !std::holds_alternative<NoPerturbation>(q_); }

  double q(double x) const;
  /// Envelope M(x) >= |q(x)|.
  double envelope(double x) const;
  /// N in M(x) <= N log g(x) for x >= y0.
  double envelope_constant() const { return envelope_n_; }
  /// y0.
  double envelope_threshold() const { return envelope_y0_; }

  /// g(x) + q(x).
  double phi(double x) const { return base_.value(x) + q(x); }

  double c() const { return norm_.c; }
  double log_c() const { return norm_.log_c; }
  double support_cap() const { return norm_.support_cap; }
  double log_tail_mass() const { return norm_.log_tail_mass; }
  /// E X by quadrature.
  double mean() const { return mean_; }
  double variance() const { return variance_; }

  /// log c - g(x) - q(x); throws OutOfSupport for x <= 0.
  double log_density(double x) const;
  /// As log_density, but -inf for x <= 0.
  double log_density_unchecked(double x) const noexcept;

  std::string describe() const;

 private:
  PerturbedDensity(ExponentModel base, Perturbation q);

  ExponentModel base_;
  Perturbation q_;
  Normalization norm_{};
  double envelope_n_ = 0.0;
  double envelope_y0_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

/// The models every property check runs over: x^2, x^3, e^x, Weibull k=3,
/// sin perturbations of x^2 and Weibull k=3, and x^3 with the
/// almost-log-concave factor.
std::vector<PerturbedDensity> preset_models();

/// n i.i.d. draws. Unperturbed Weibull exponents use the exact transform
/// (-log U)^{1/k}; everything else inverts a tabulated CDF.
std::vector<double> sample_unconditional(const PerturbedDensity& model,
                                         std::size_t n, std::uint64_t seed);

}  // namespace stretchwalk
