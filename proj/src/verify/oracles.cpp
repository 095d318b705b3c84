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

#include "verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace stretchwalk::verify {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

SumTailOracle::SumTailOracle(const PerturbedDensity& model, double lo, double hi,
                             std::size_t cells)
    : model_(model), lo_(std::max(lo, 0.0)), hi_(hi) {
  require(hi_ > lo_ && cells >= 16, ErrorCode::kInvalidArgument, "empty oracle range");
  h_ = (hi_ - lo_) / static_cast<double>(cells);
  shift_ = kNegInf;
  for (std::size_t j = 0; j <= 4 * cells; ++j)
    shift_ = std::max(shift_, model_.log_density_unchecked(
                                  lo_ + 0.25 * h_ * static_cast<double>(j)));
  require(std::isfinite(shift_), ErrorCode::kInvalidArgument, "oracle range has no mass");

  auto f = [&](double x) { return std::exp(model_.log_density_unchecked(x) - shift_); };
  tail_.assign(cells + 1, 0.0);
  for (std::size_t j = cells; j-- > 0;) {
    const double a = lo_ + h_ * static_cast<double>(j);
    const double b = a + h_;
    // Two Simpson panels per cell.
    const double q = 0.25 * h_;
    const double cell =
        h_ / 12.0 * (f(a) + 4.0 * f(a + q) + 2.0 * f(a + 2 * q) + 4.0 * f(a + 3 * q) + f(b));
    tail_[j] = tail_[j + 1] + cell;
  }
}

double SumTailOracle::log_single(double t) const {
  if (t <= lo_) return std::log(tail_[0]) + shift_;
  if (t >= hi_) return kNegInf;
  const std::size_t j =
      std::min(static_cast<std::size_t>((t - lo_) / h_), tail_.size() - 2);
  const double right = lo_ + h_ * static_cast<double>(j + 1);
  auto f = [&](double x) { return std::exp(model_.log_density_unchecked(x) - shift_); };
  const double w = right - t;
  const double part = w / 6.0 * (f(t) + 4.0 * f(t + 0.5 * w) + f(right));
  const double total = tail_[j + 1] + part;
  return total > 0.0 ? std::log(total) + shift_ : kNegInf;
}

double SumTailOracle::log_pair(double t, int panels) const {
  numerics::LogQuadOptions opts;
  opts.panels = panels;
  opts.rel_tol = 1e-11;
  auto log_f = [&](double x) {
    const double lp = model_.log_density_unchecked(x);
    if (!std::isfinite(lp)) return kNegInf;
    return lp + log_single(t - x);
  };
  return numerics::log_integrate_exp(log_f, lo_, hi_, opts);
}

double SumTailOracle::log_pair_table(double t) const {
  constexpr std::size_t kNodes = 4096;
  const double lo = 2.0 * lo_, hi = 2.0 * hi_;
  if (pair_.empty()) {
    pair_.resize(kNodes + 1);
    for (std::size_t j = 0; j <= kNodes; ++j)
      pair_[j] = log_pair(lo + (hi - lo) * static_cast<double>(j) / kNodes, 24);
  }
  if (t <= lo) return pair_.front();
  if (t >= hi) return kNegInf;
  const double pos = (t - lo) / (hi - lo) * kNodes;
  const std::size_t j = std::min(static_cast<std::size_t>(pos), kNodes - 1);
  const double w = pos - static_cast<double>(j);
  if (!std::isfinite(pair_[j + 1])) return pair_[j] + std::log1p(-w);
  return pair_[j] + w * (pair_[j + 1] - pair_[j]);
}

double SumTailOracle::log_tail(std::size_t m, double t) const {
  require(m >= 1 && m <= 3, ErrorCode::kInvalidArgument, "oracle supports m <= 3");
  if (m == 1) return log_single(t);
  if (m == 2) return log_pair(t, 128);
  numerics::LogQuadOptions opts;
  opts.rel_tol = 1e-11;
  auto log_f = [&](double x) {
    const double lp = model_.log_density_unchecked(x);
    if (!std::isfinite(lp)) return kNegInf;
    return lp + log_pair_table(t - x);
  };
  return numerics::log_integrate_exp(log_f, lo_, hi_, opts);
}

double quadrature_log_prob_c(const PerturbedDensity& model, const BandEvent& ev) {
  const SumTailOracle oracle(model, 0.0, model.support_cap());
  return oracle.log_tail(ev.n, static_cast<double>(ev.n) * ev.a);
}

double quadrature_log_prob_ic(const PerturbedDensity& model, const BandEvent& ev) {
  const SumTailOracle oracle(model, ev.a - ev.eps, ev.a + ev.eps);
  return oracle.log_tail(ev.n, static_cast<double>(ev.n) * ev.a);
}

double quadrature_log_prob_icc(const PerturbedDensity& model, const BandEvent& ev) {
  return numerics::log_diff_exp(quadrature_log_prob_c(model, ev),
                                quadrature_log_prob_ic(model, ev));
}

double quadrature_log_survival(const PerturbedDensity& model, double x) {
  auto log_f = [&model](double y) { return model.log_density_unchecked(y); };
  const double hi = numerics::tail_cut(log_f, x, std::max(2.0 * x, 1.0));
  return numerics::log_integrate_exp(log_f, x, hi);
}

}  // namespace stretchwalk::verify
