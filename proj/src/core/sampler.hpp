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
#include <vector>

#include "core/density.hpp"
#include "core/rng.hpp"
#include "core/tabulated_sampler.hpp"

namespace stretchwalk {

enum class Method { kTiltedIS, kFixedSumGibbs, kRejection };
enum class Constraint { kSumAtLeast, kSumEquals };

const char* method_name(Method m);

struct ConditionedSample {
  std::vector<double> values;
  double log_weight = 0.0;  // 0 for exact-conditional methods
  Method method = Method::kTiltedIS;
  Constraint constraint = Constraint::kSumAtLeast;
};

struct LocalizationEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  double n_eff = 0.0;
  std::size_t replications = 0;
};

/// Inverse-CDF sampler for the tilted law exp(t x) p(x) / E exp(tX).
class TiltedLaw {
 public:
  TiltedLaw(const PerturbedDensity& model, double t, std::size_t cells = 4096);

  double t() const { return t_; }
  double log_mgf() const { return log_mgf_; }
  double sample(RandomStream& rng) const { return table_.sample(rng); }
  const TabulatedSampler& table() const { return table_; }

 private:
  double t_;
  double log_mgf_;
  TabulatedSampler table_;
};

/// One i.i.d. draw from the tilted law, with log w = n Lambda(t) - t sum(x).
ConditionedSample tilted_draw(const TiltedLaw& law, std::size_t n, RandomStream& rng);

struct ImportanceResult {
  double tilt = 0.0;
  double log_p_c = 0.0;       // log of the estimate of P(C)
  double p_c = 0.0;
  double p_c_std_err = 0.0;
  double log_p_ic = 0.0;      // log of the estimate of P(I and C)
  double p_ic = 0.0;
  double p_ic_std_err = 0.0;
  LocalizationEstimate conditional;  // ratio estimate of P(I | C)
};

/// Importance sampling of C = {S >= n a} and I and C under the tilt t(a)
/// (no tilt when a <= E X). Band membership is strict. Trial r uses the
/// seed derive_seed(seed, r). Throws DegenerateWeights when the effective
/// sample size of the weights on C is below 30.
ImportanceResult importance_estimate(const PerturbedDensity& model, std::size_t n,
                                     double a, double eps, std::size_t trials,
                                     std::uint64_t seed);

/// Table for the law of one coordinate of a pair given their sum s,
/// density proportional to p(u) p(s - u) on (0, s).
TabulatedSampler pair_conditional(const PerturbedDensity& model, double s,
                                  std::size_t cells = 512);

/// Random-pair Gibbs chain on {x > 0, sum x = s_total}, started at the
/// all-equal point. Each sweep makes n pair updates; one state per sweep
/// is kept after burn_in sweeps.
std::vector<ConditionedSample> gibbs_fixed_sum(const PerturbedDensity& model, std::size_t n,
                                               double s_total, std::size_t sweeps,
                                               std::size_t burn_in, std::uint64_t seed);

/// Exact draw from the law of (X_1..X_n) given S >= n a, by rejection from
/// tilted proposals: a proposal is accepted with probability
/// exp(-t (S - n a)) on {S >= n a}. Throws BudgetExceeded after
/// max_proposals rejections.
ConditionedSample rejection_draw(const TiltedLaw& law, std::size_t n, double a,
                                 RandomStream& rng, std::size_t max_proposals = 200000);

/// P(I | C) by the ratio estimator of importance_estimate (TiltedIS, budget
/// = trials) or as the fraction of fixed-sum Gibbs states inside the band
/// (FixedSumGibbs, budget = post-burn-in sweeps split over four chains, with
/// batch-means standard error).
LocalizationEstimate estimate_localization(const PerturbedDensity& model, std::size_t n,
                                           double a, double eps, Method method,
                                           std::size_t budget, std::uint64_t seed);

}  // namespace stretchwalk
