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

#include "core/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/numerics.hpp"
#include "core/ratefn.hpp"

namespace stretchwalk {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kGibbsChains = 4;
constexpr std::size_t kBatchesPerChain = 10;
constexpr std::size_t kGibbsBurnIn = 100;

bool inside_band(const std::vector<double>& x, double a, double eps) {
  return std::all_of(x.begin(), x.end(),
                     [&](double v) { return v > a - eps && v < a + eps; });
}

double sum_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

// Mean and standard error of exp(log_w) 1{hit} over all trials, returned in
// log scale for the mean. `shift` is a common offset for the exponentials.
struct WeightedMean {
  double log_mean = kNegInf;
  double mean = 0.0;
  double std_err = 0.0;
};

WeightedMean weighted_mean(const std::vector<double>& log_w, const std::vector<char>& hit,
                           double shift) {
  const double m = static_cast<double>(log_w.size());
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    if (!hit[i]) continue;
    const double w = std::exp(log_w[i] - shift);
    s1 += w;
    s2 += w * w;
  }
  WeightedMean out;
  if (s1 <= 0.0) return out;
  const double mean = s1 / m;
  const double var = std::max(0.0, (s2 / m - mean * mean) * m / (m - 1.0));
  out.log_mean = std::log(mean) + shift;
  out.mean = std::exp(out.log_mean);
  out.std_err = std::sqrt(var / m) * std::exp(shift);
  return out;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kTiltedIS: return "tilted-is";
    case Method::kFixedSumGibbs: return "fixed-sum-gibbs";
    case Method::kRejection: return "rejection";
  }
  return "unknown";
}

TiltedLaw::TiltedLaw(const PerturbedDensity& model, double t, std::size_t cells)
    : t_(t),
      log_mgf_(stretchwalk::log_mgf(model, t)),
      table_(
          [&model, t](double x) { return model.log_density_unchecked(x) + t * x; }, 0.0,
          numerics::tail_cut(
              [&model, t](double x) { return model.log_density_unchecked(x) + t * x; },
              0.0, model.support_cap()),
          cells) {}

ConditionedSample tilted_draw(const TiltedLaw& law, std::size_t n, RandomStream& rng) {
  ConditionedSample s;
  s.values.resize(n);
  for (double& v : s.values) v = law.sample(rng);
  s.log_weight = static_cast<double>(n) * law.log_mgf() - law.t() * sum_of(s.values);
  s.method = Method::kTiltedIS;
  s.constraint = Constraint::kSumAtLeast;
  return s;
}

ImportanceResult importance_estimate(const PerturbedDensity& model, std::size_t n, double a,
                                     double eps, std::size_t trials, std::uint64_t seed) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  require(trials >= 1000, ErrorCode::kInvalidArgument, "importance sampling needs >= 1000 trials");
  require(a > 0.0 && eps > 0.0, ErrorCode::kInvalidArgument, "a and eps must be positive");
  const double t = a > model.mean() ? tilt_for_mean(model, a) : 0.0;
  const TiltedLaw law(model, t);
  const double level = static_cast<double>(n) * a;

  std::vector<double> log_w(trials);
  std::vector<char> in_c(trials), in_ic(trials);
  numerics::parallel_for(trials, [&](std::size_t r) {
    RandomStream rng(derive_seed(seed, r));
    const ConditionedSample s = tilted_draw(law, n, rng);
    log_w[r] = s.log_weight;
    in_c[r] = sum_of(s.values) >= level;
    in_ic[r] = in_c[r] && inside_band(s.values, a, eps);
  });

  double shift = kNegInf;
  for (std::size_t r = 0; r < trials; ++r)
    if (in_c[r]) shift = std::max(shift, log_w[r]);

  ImportanceResult out;
  out.tilt = t;
  out.log_p_c = out.log_p_ic = kNegInf;
  if (!std::isfinite(shift)) {
    fail(ErrorCode::kDegenerateWeights, "no trial landed in C");
  }
  const WeightedMean c = weighted_mean(log_w, in_c, shift);
  const WeightedMean ic = weighted_mean(log_w, in_ic, shift);
  out.log_p_c = c.log_mean;
  out.p_c = c.mean;
  out.p_c_std_err = c.std_err;
  out.log_p_ic = ic.log_mean;
  out.p_ic = ic.mean;
  out.p_ic_std_err = ic.std_err;

  // Ratio estimator over C and its delta-method error, in shifted units.
  double sx = 0.0, sy = 0.0, sxx = 0.0;
  for (std::size_t r = 0; r < trials; ++r) {
    if (!in_c[r]) continue;
    const double w = std::exp(log_w[r] - shift);
    sx += w;
    sxx += w * w;
    if (in_ic[r]) sy += w;
  }
  const double ratio = sy / sx;
  double resid = 0.0;
  for (std::size_t r = 0; r < trials; ++r) {
    if (!in_c[r]) continue;
    const double w = std::exp(log_w[r] - shift);
    const double d = (in_ic[r] ? w : 0.0) - ratio * w;
    resid += d * d;
  }
  const double m = static_cast<double>(trials);
  const double xbar = sx / m;
  out.conditional.p_hat = ratio;
  out.conditional.std_err = std::sqrt(resid / (m - 1.0) / m) / xbar;
  out.conditional.n_eff = sx * sx / sxx;
  out.conditional.replications = trials;
  require(out.conditional.n_eff >= 30.0, ErrorCode::kDegenerateWeights,
          "effective sample size on C is below 30");
  return out;
}

TabulatedSampler pair_conditional(const PerturbedDensity& model, double s, std::size_t cells) {
  require(s > 0.0, ErrorCode::kInvalidArgument, "pair sum must be positive");
  return TabulatedSampler(
      [&model, s](double u) {
        return model.log_density_unchecked(u) + model.log_density_unchecked(s - u);
      },
      0.0, s, cells, 50.0, 256);
}

std::vector<ConditionedSample> gibbs_fixed_sum(const PerturbedDensity& model, std::size_t n,
                                               double s_total, std::size_t sweeps,
                                               std::size_t burn_in, std::uint64_t seed) {
  require(n >= 2, ErrorCode::kInvalidArgument, "fixed-sum chain needs n >= 2");
  require(s_total > 0.0, ErrorCode::kInvalidArgument, "sum must be positive");
  RandomStream rng(seed);
  std::vector<double> x(n, s_total / static_cast<double>(n));
  std::vector<ConditionedSample> out;
  out.reserve(sweeps);
  for (std::size_t sweep = 0; sweep < burn_in + sweeps; ++sweep) {
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = rng.index(n);
      std::size_t j = rng.index(n - 1);
      if (j >= i) ++j;
      const double s = x[i] + x[j];
      const double u = pair_conditional(model, s).sample(rng);
      x[i] = u;
      x[j] = s - u;
    }
    if (sweep >= burn_in) {
      ConditionedSample state;
      state.values = x;
      state.method = Method::kFixedSumGibbs;
      state.constraint = Constraint::kSumEquals;
      out.push_back(std::move(state));
    }
  }
  return out;
}

ConditionedSample rejection_draw(const TiltedLaw& law, std::size_t n, double a,
                                 RandomStream& rng, std::size_t max_proposals) {
  require(law.t() >= 0.0, ErrorCode::kInvalidArgument, "rejection needs a nonnegative tilt");
  const double level = static_cast<double>(n) * a;
  for (std::size_t p = 0; p < max_proposals; ++p) {
    ConditionedSample s = tilted_draw(law, n, rng);
    const double excess = sum_of(s.values) - level;
    if (excess < 0.0) continue;
    if (rng.uniform() < std::exp(-law.t() * excess)) {
      s.log_weight = 0.0;
      s.method = Method::kRejection;
      return s;
    }
  }
  fail(ErrorCode::kBudgetExceeded, "rejection sampler exhausted its proposal budget");
}

LocalizationEstimate estimate_localization(const PerturbedDensity& model, std::size_t n,
                                           double a, double eps, Method method,
                                           std::size_t budget, std::uint64_t seed) {
  switch (method) {
    case Method::kTiltedIS:
      return importance_estimate(model, n, a, eps, budget, seed).conditional;
    case Method::kFixedSumGibbs:
      break;
    case Method::kRejection:
      fail(ErrorCode::kInvalidArgument, "localization supports tilted-is and fixed-sum-gibbs");
  }
  const std::size_t per_chain = budget / kGibbsChains;
  require(per_chain >= kBatchesPerChain, ErrorCode::kInvalidArgument,
          "Gibbs budget too small for batch means");
  std::vector<std::vector<double>> batch_means(kGibbsChains);
  numerics::parallel_for(kGibbsChains, [&](std::size_t c) {
    const auto states = gibbs_fixed_sum(model, n, static_cast<double>(n) * a, per_chain,
                                        kGibbsBurnIn, derive_seed(seed, c));
    const std::size_t len = per_chain / kBatchesPerChain;
    for (std::size_t b = 0; b < kBatchesPerChain; ++b) {
      double hits = 0.0;
      for (std::size_t k = b * len; k < (b + 1) * len; ++k)
        hits += inside_band(states[k].values, a, eps) ? 1.0 : 0.0;
      batch_means[c].push_back(hits / static_cast<double>(len));
    }
  });
  std::vector<double> all;
  for (const auto& bm : batch_means) all.insert(all.end(), bm.begin(), bm.end());
  const double k = static_cast<double>(all.size());
  double mean = 0.0;
  for (double v : all) mean += v;
  mean /= k;
  double var = 0.0;
  for (double v : all) var += (v - mean) * (v - mean);
  var /= (k - 1.0);

  LocalizationEstimate est;
  est.p_hat = mean;
  est.std_err = std::sqrt(var / k);
  est.replications = per_chain * kGibbsChains;
  const double reps = static_cast<double>(est.replications);
  const double iid_var = mean * (1.0 - mean);
  est.n_eff = est.std_err > 0.0 ? std::min(reps, iid_var / (est.std_err * est.std_err)) : reps;
  return est;
}

}  // namespace stretchwalk
