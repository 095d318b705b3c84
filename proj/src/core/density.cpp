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

#include "core/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"
#include "core/numerics.hpp"
#include "core/rng.hpp"
#include "core/tabulated_sampler.hpp"

namespace stretchwalk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t segment(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(xs.begin(), it));
  return std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
}

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
  const std::size_t i = segment(xs, x);
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + t * (ys[i + 1] - ys[i]);
}

// Second-order Taylor continuation from node i.
double taylor(const TabulatedExponent& t, std::size_t i, double x, int order) {
  const double d = x - t.x[i];
  switch (order) {
    case 0: return t.g[i] + t.d1[i] * d + 0.5 * t.d2[i] * d * d;
    case 1: return t.d1[i] + t.d2[i] * d;
    default: return t.d2[i];
  }
}

double hermite(const TabulatedExponent& t, double x, int order) {
  if (x <= t.x.front()) return taylor(t, 0, x, order);
  if (x >= t.x.back()) return taylor(t, t.x.size() - 1, x, order);
  if (order == 2) return interp_linear(t.x, t.d2, x);
  const std::size_t i = segment(t.x, x);
  const double h = t.x[i + 1] - t.x[i];
  const double s = (x - t.x[i]) / h;
  const double g0 = t.g[i], g1 = t.g[i + 1];
  const double m0 = t.d1[i] * h, m1 = t.d1[i + 1] * h;
  if (order == 0) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * m1;
  }
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * g0 + (3 * s2 - 4 * s + 1) * m0 +
          (-6 * s2 + 6 * s) * g1 + (3 * s2 - 2 * s) * m1) /
         h;
}

double sin_envelope_shape(const ExponentModel& g, double x) {
  return std::clamp(std::log(g.value(x)), 0.0, 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// ExponentModel

ExponentModel::ExponentModel(Kind kind) : kind_(std::move(kind)) {
  threshold_ = std::visit(
      Overloaded{
          [](const PowerExponent&) { return 0.0; },
          [](const ExpExponent&) { return 0.0; },
          [](const WeibullExponent& w) { return std::pow((w.k - 1.0) / w.k, 1.0 / w.k); },
          [](const TabulatedExponent& t) {
            std::size_t i = t.d1.size();
            while (i > 0 && t.d1[i - 1] > 0.0) --i;
            require(i < t.d1.size(), ErrorCode::kInvalidModel,
                    "tabulated g is not increasing at the end of its grid");
            return t.x[i];
          },
      },
      kind_);
}

ExponentModel ExponentModel::power(double beta) {
  require(std::isfinite(beta) && beta >= 1.0, ErrorCode::kInvalidModel,
          "power exponent needs beta >= 1");
  return ExponentModel(PowerExponent{beta});
}

ExponentModel ExponentModel::exponential() { return ExponentModel(ExpExponent{}); }

ExponentModel ExponentModel::weibull(double k) {
  require(std::isfinite(k) && k > 2.0, ErrorCode::kInvalidModel,
          "Weibull exponent needs shape k > 2");
  return ExponentModel(WeibullExponent{k});
}

ExponentModel ExponentModel::tabulated(std::span<const double> x,
                                       std::span<const double> g) {
  require(x.size() == g.size() && x.size() >= 5, ErrorCode::kInvalidModel,
          "tabulated g needs at least 5 (x, g) pairs");
  TabulatedExponent t;
  t.x.assign(x.begin(), x.end());
  t.g.assign(g.begin(), g.end());
  const std::size_t n = t.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    require(std::isfinite(t.x[i]) && std::isfinite(t.g[i]) && t.x[i] > 0.0,
            ErrorCode::kInvalidModel, "tabulated g needs finite values at x > 0");
    if (i > 0)
      require(t.x[i] > t.x[i - 1], ErrorCode::kInvalidModel,
              "tabulated x must be strictly increasing");
  }
  t.d1.resize(n);
  t.d2.resize(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = t.x[i] - t.x[i - 1];
    const double hp = t.x[i + 1] - t.x[i];
    const double sm = (t.g[i] - t.g[i - 1]) / hm;
    const double sp = (t.g[i + 1] - t.g[i]) / hp;
    t.d1[i] = (sm * hp + sp * hm) / (hm + hp);
    t.d2[i] = 2.0 * (sp - sm) / (hm + hp);
    require(t.d2[i] >= -1e-9 * (1.0 + std::fabs(t.g[i])), ErrorCode::kInvalidModel,
            "tabulated g fails the convexity probe");
  }
  t.d2[0] = t.d2[1];
  t.d2[n - 1] = t.d2[n - 2];
  t.d1[0] = (t.g[1] - t.g[0]) / (t.x[1] - t.x[0]) - 0.5 * t.d2[0] * (t.x[1] - t.x[0]);
  t.d1[n - 1] = (t.g[n - 1] - t.g[n - 2]) / (t.x[n - 1] - t.x[n - 2]) +
                0.5 * t.d2[n - 1] * (t.x[n - 1] - t.x[n - 2]);
  return ExponentModel(std::move(t));
}

double ExponentModel::value(double x) const {
  return std::visit(
      Overloaded{
          [x](const PowerExponent& p) { return std::pow(x, p.beta); },
          [x](const ExpExponent&) { return std::exp(x); },
          [x](const WeibullExponent& w) {
            return std::pow(x, w.k) - (w.k - 1.0) * std::log(x);
          },
          [x](const TabulatedExponent& t) { return hermite(t, x, 0); },
      },
      kind_);
}

double ExponentModel::log_value(double x) const {
  if (std::holds_alternative<ExpExponent>(kind_)) return x;
  return std::log(value(x));
}

double ExponentModel::d1(double x) const {
  return std::visit(
      Overloaded{
          [x](const PowerExponent& p) { return p.beta * std::pow(x, p.beta - 1.0); },
          [x](const ExpExponent&) { return std::exp(x); },
          [x](const WeibullExponent& w) {
            return w.k * std::pow(x, w.k - 1.0) - (w.k - 1.0) / x;
          },
          [x](const TabulatedExponent& t) { return hermite(t, x, 1); },
      },
      kind_);
}

double ExponentModel::d2(double x) const {
  return std::visit(
      Overloaded{
          [x](const PowerExponent& p) {
            return p.beta == 1.0 ? 0.0
                                 : p.beta * (p.beta - 1.0) * std::pow(x, p.beta - 2.0);
          },
          [x](const ExpExponent&) { return std::exp(x); },
          [x](const WeibullExponent& w) {
            return w.k * (w.k - 1.0) * std::pow(x, w.k - 2.0) + (w.k - 1.0) / (x * x);
          },
          [x](const TabulatedExponent& t) { return hermite(t, x, 2); },
      },
      kind_);
}

double ExponentModel::remainder(double x, double d) const {
  return std::visit(
      Overloaded{
          [x, d](const PowerExponent& p) {
            return std::pow(x, p.beta) * numerics::pow1p_remainder(p.beta, d / x);
          },
          [x, d](const ExpExponent&) {
            return std::exp(x) * numerics::expm1_remainder(d);
          },
          [x, d](const WeibullExponent& w) {
            const double u = d / x;
            return std::pow(x, w.k) * numerics::pow1p_remainder(w.k, u) -
                   (w.k - 1.0) * numerics::log1p_remainder(u);
          },
          [this, x, d](const TabulatedExponent&) {
            return value(x + d) - value(x) - d1(x) * d;
          },
      },
      kind_);
}

double ExponentModel::increment(double x, double d) const {
  return remainder(x, d) + d1(x) * d;
}

double ExponentModel::inverse(double level) const {
  double lo = threshold_;
  if (value(lo) >= level) return lo;
  double hi = std::max(1.0, 2.0 * lo + 1.0);
  while (value(hi) < level) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e300, ErrorCode::kDomainError, "g never reaches requested level");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) >= level ? hi : lo) = mid;
  }
  return hi;
}

std::string ExponentModel::name() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const PowerExponent& p) { out << "power(beta=" << p.beta << ")"; },
                 [&](const ExpExponent&) { out << "exp"; },
                 [&](const WeibullExponent& w) { out << "weibull(k=" << w.k << ")"; },
                 [&](const TabulatedExponent& t) {
                   out << "tabulated(" << t.x.size() << " nodes)";
                 },
             },
             kind_);
  return out.str();
}

ExponentInvariants probe_invariants(const ExponentModel& g, double x_max,
                                    std::size_t points) {
  ExponentInvariants inv{true, true, true};
  const double x0 = g.threshold() * (1.0 + 1e-9) + 1e-9;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x0 + (x_max - x0) * static_cast<double>(i + 1) / points;
    if (g.d2(x) < -1e-12) inv.convex = false;
    if (!(g.d1(x) > 0.0)) inv.increasing = false;
  }
  // log(g(x)/x) at 1e2, 1e3, 1e4; exp(x) overflows so work in logs.
  double prev = -kInf;
  for (double x : {1e2, 1e3, 1e4}) {
    const double log_g = std::holds_alternative<ExpExponent>(g.kind())
                             ? x
                             : std::log(g.value(x));
    const double ratio = log_g - std::log(x);
    if (!(ratio > prev)) inv.superlinear = false;
    prev = ratio;
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Perturbations

namespace {

double perturbation_q(const ExponentModel& g, const Perturbation& q, double x) {
  return std::visit(
      Overloaded{
          [](const NoPerturbation&) { return 0.0; },
          [&](const SinPerturbation& s) {
            return s.lambda * std::sin(x) * sin_envelope_shape(g, x);
          },
          [x](const AlmostLogConcavePerturbation&) {
            const double s = std::sin(x);
            return -std::log1p(0.5 * s * s);
          },
          [x](const TabulatedPerturbation& t) {
            if (x < t.x.front() || x > t.x.back()) return 0.0;
            return interp_linear(t.x, t.q, x);
          },
      },
      q);
}

void validate_perturbation(const Perturbation& q) {
  if (const auto* s = std::get_if<SinPerturbation>(&q)) {
    require(std::isfinite(s->lambda) && std::fabs(s->lambda) <= 1.0,
            ErrorCode::kInvalidModel, "sin perturbation needs |lambda| <= 1");
  }
  if (const auto* t = std::get_if<TabulatedPerturbation>(&q)) {
    require(t->x.size() == t->q.size() && t->x.size() >= 2, ErrorCode::kInvalidModel,
            "tabulated q needs at least two nodes");
    for (std::size_t i = 1; i < t->x.size(); ++i)
      require(t->x[i] > t->x[i - 1], ErrorCode::kInvalidModel,
              "tabulated q grid must be strictly increasing");
  }
}

}  // namespace

Normalization normalize(const ExponentModel& g, const Perturbation& q) {
  validate_perturbation(q);
  const double x_thr = g.threshold();
  require(g.d1(x_thr + 1.0) > 0.0 && g.d1(2.0 * x_thr + 2.0) > 0.0,
          ErrorCode::kInvalidModel, "g is not increasing beyond its threshold");

  auto phi = [&](double x) { return g.value(x) + perturbation_q(g, q, x); };

  // Grow the cap until phi has risen 100 nats above its running minimum.
  constexpr double kRise = 100.0;
  constexpr int kScan = 512;
  double hi = std::max(1.0, 2.0 * x_thr + 1.0);
  double phi_min = kInf;
  double argmin = 0.0;
  for (;;) {
    for (int i = 1; i <= kScan; ++i) {
      const double x = hi * i / kScan;
      const double v = phi(x);
      if (v < phi_min) {
        phi_min = v;
        argmin = x;
      }
    }
    const double at = phi(hi);
    if (at >= phi_min + kRise && at > phi(0.9 * hi)) break;
    hi *= 2.0;
    require(hi < 1e8, ErrorCode::kNonIntegrable,
            "tail mass does not decrease under cap doubling");
  }
  double lo = argmin;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) >= phi_min + kRise ? hi : lo) = mid;
  }
  const double cap = hi;

  auto log_f = [&](double x) { return x > 0.0 ? -phi(x) : -kInf; };
  const double log_z = numerics::log_integrate_exp(log_f, 0.0, cap);
  require(std::isfinite(log_z), ErrorCode::kNonIntegrable, "zero or infinite mass");
  const double tail_hi = numerics::tail_cut(log_f, cap, cap);
  const double log_tail = numerics::log_integrate_exp(log_f, cap, tail_hi) - log_z;
  require(log_tail < std::log(1e-12), ErrorCode::kNonIntegrable,
          "tail mass beyond the support cap is not negligible");
  return {std::exp(-log_z), -log_z, cap, log_tail};
}

// ---------------------------------------------------------------------------
// PerturbedDensity

PerturbedDensity::PerturbedDensity(ExponentModel base, Perturbation q)
    : base_(std::move(base)), q_(std::move(q)) {}

PerturbedDensity PerturbedDensity::create(ExponentModel base, Perturbation q) {
  PerturbedDensity d(std::move(base), std::move(q));
  d.norm_ = normalize(d.base_, d.q_);
  const ExponentModel& g = d.base_;
  std::visit(Overloaded{
                 [&](const NoPerturbation&) {
                   d.envelope_n_ = 0.0;
                   d.envelope_y0_ = g.threshold();
                 },
                 [&](const SinPerturbation& s) {
                   d.envelope_n_ = std::fabs(s.lambda);
                   d.envelope_y0_ = g.inverse(std::exp(1.0));
                 },
                 [&](const AlmostLogConcavePerturbation&) {
                   d.envelope_n_ = 1.0;
                   d.envelope_y0_ = g.inverse(1.5);
                 },
                 [&](const TabulatedPerturbation& t) {
                   d.envelope_y0_ = g.inverse(std::exp(1.0));
                   double n_env = 0.0;
                   for (std::size_t i = 0; i < t.x.size(); ++i) {
                     if (t.x[i] < d.envelope_y0_) continue;
                     n_env = std::max(n_env, std::fabs(t.q[i]) / std::log(g.value(t.x[i])));
                   }
                   d.envelope_n_ = std::max(n_env, 1e-12);
                 },
             },
             d.q_);
  const auto moments = numerics::log_moments(
      [&d](double x) { return d.log_density_unchecked(x); }, 0.0, d.support_cap());
  d.mean_ = moments.mean;
  d.variance_ = moments.variance;
  return d;
}

double PerturbedDensity::q(double x) const { return perturbation_q(base_, q_, x); }

double PerturbedDensity::envelope(double x) const {
  return std::visit(
      Overloaded{
          [](const NoPerturbation&) { return 0.0; },
          [&](const SinPerturbation& s) {
            return std::fabs(s.lambda) * sin_envelope_shape(base_, x);
          },
          [](const AlmostLogConcavePerturbation&) { return std::log(1.5); },
          [&](const TabulatedPerturbation&) { return std::fabs(q(x)); },
      },
      q_);
}

double PerturbedDensity::log_density(double x) const {
  require(x > 0.0, ErrorCode::kOutOfSupport, "density is supported on (0, inf)");
  return norm_.log_c - base_.value(x) - q(x);
}

double PerturbedDensity::log_density_unchecked(double x) const noexcept {
  if (!(x > 0.0)) return -kInf;
  return norm_.log_c - base_.value(x) - q(x);
}

std::string PerturbedDensity::describe() const {
  std::ostringstream out;
  out << base_.name();
  std::visit(Overloaded{
                 [](const NoPerturbation&) {},
                 [&](const SinPerturbation& s) { out << "+sin(lambda=" << s.lambda << ")"; },
                 [&](const AlmostLogConcavePerturbation&) { out << "+almost_log_concave"; },
                 [&](const TabulatedPerturbation&) { out << "+tabulated_q"; },
             },
             q_);
  return out.str();
}

std::vector<PerturbedDensity> preset_models() {
  return {
      PerturbedDensity::create(ExponentModel::power(2.0)),
      PerturbedDensity::create(ExponentModel::power(3.0)),
      PerturbedDensity::create(ExponentModel::exponential()),
      PerturbedDensity::create(ExponentModel::weibull(3.0)),
      PerturbedDensity::create(ExponentModel::power(2.0), SinPerturbation{1.0}),
      PerturbedDensity::create(ExponentModel::weibull(3.0), SinPerturbation{1.0}),
      PerturbedDensity::create(ExponentModel::power(3.0), AlmostLogConcavePerturbation{}),
  };
}

std::vector<double> sample_unconditional(const PerturbedDensity& model, std::size_t n,
                                         std::uint64_t seed) {
  std::vector<double> out(n);
  if (n == 0) return out;
  RandomStream rng(seed);
  if (const auto* w = std::get_if<WeibullExponent>(&model.base().kind());
      w != nullptr && !model.perturbed()) {
    for (auto& v : out) v = std::pow(-std::log(rng.uniform()), 1.0 / w->k);
    return out;
  }
  const TabulatedSampler table(
      [&model](double x) { return model.log_density_unchecked(x); }, 0.0,
      model.support_cap(), 4096);
  for (auto& v : out) v = table.sample(rng);
  return out;
}

}  // namespace stretchwalk
