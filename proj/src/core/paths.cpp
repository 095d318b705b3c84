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

#include "core/paths.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/numerics.hpp"
#include "core/ratefn.hpp"

namespace stretchwalk {
namespace {

constexpr std::size_t kProposalBudget = 200000;
constexpr std::size_t kFallbackBurnIn = 100;

}  // namespace

const char* conditioning_name(Conditioning c) {
  switch (c) {
    case Conditioning::kEndAtLeast: return "end-at-least";
    case Conditioning::kEndEquals: return "end-equals";
    case Conditioning::kNone: return "none";
  }
  return "unknown";
}

Trajectory make_trajectory(std::vector<double> increments, Conditioning conditioning) {
  Trajectory t;
  t.increments = std::move(increments);
  t.partial_sums.resize(t.increments.size());
  double s = 0.0;
  for (std::size_t i = 0; i < t.increments.size(); ++i) {
    s += t.increments[i];
    t.partial_sums[i] = s;
  }
  t.conditioning = conditioning;
  return t;
}

PathSimulator::PathSimulator(const PerturbedDensity& model, std::size_t n, double a,
                             Conditioning conditioning)
    : model_(model), n_(n), a_(a), conditioning_(conditioning) {
  require(n >= 2, ErrorCode::kInvalidArgument, "paths need n >= 2");
  if (conditioning == Conditioning::kEndAtLeast) {
    require(a > model.mean(), ErrorCode::kInvalidArgument,
            "conditioning on S >= na needs a above the mean");
    law_ = std::make_shared<const TiltedLaw>(model, tilt_for_mean(model, a));
  }
}

Trajectory PathSimulator::draw(std::uint64_t seed) const {
  RandomStream rng(seed);
  std::vector<double> x;
  std::string note;
  switch (conditioning_) {
    case Conditioning::kNone:
      x = sample_unconditional(model_, n_, splitmix64(seed));
      break;
    case Conditioning::kEndAtLeast:
      try {
        x = rejection_draw(*law_, n_, a_, rng, kProposalBudget).values;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBudgetExceeded) throw;
        note = "rejection budget exhausted; fixed-sum Gibbs draw at S = na";
        x = gibbs_fixed_sum(model_, n_, static_cast<double>(n_) * a_, 1, kFallbackBurnIn,
                            splitmix64(seed))
                .back()
                .values;
      }
      break;
    case Conditioning::kEndEquals:
      x = gibbs_fixed_sum(model_, n_, static_cast<double>(n_) * a_, 1, kFallbackBurnIn,
                          splitmix64(seed))
              .back()
              .values;
      break;
  }
  rng.shuffle(x);
  Trajectory t = make_trajectory(std::move(x), conditioning_);
  t.note = std::move(note);
  return t;
}

Trajectory simulate_conditioned_path(const PerturbedDensity& model, std::size_t n, double a,
                                     Conditioning conditioning, std::uint64_t seed) {
  return PathSimulator(model, n, a, conditioning).draw(seed);
}

std::vector<double> sliding_slopes(const Trajectory& traj, std::size_t k) {
  const std::size_t n = traj.partial_sums.size();
  require(k >= 1 && k <= n, ErrorCode::kBadWindow, "window length must lie in [1, n]");
  std::vector<double> out(n - k + 1);
  const double kd = static_cast<double>(k);
  for (std::size_t j = 0; j + k <= n; ++j) {
    const double before = j == 0 ? 0.0 : traj.partial_sums[j - 1];
    out[j] = (traj.partial_sums[j + k - 1] - before) / kd;
  }
  return out;
}

SegmentReport detect_segments(const Trajectory& traj, std::size_t k, double alpha) {
  SegmentReport r;
  r.k = k;
  r.alpha = alpha;
  r.slopes = sliding_slopes(traj, k);
  r.max_slope = r.slopes.front();
  for (std::size_t j = 1; j < r.slopes.size(); ++j) {
    if (r.slopes[j] > r.max_slope) {
      r.max_slope = r.slopes[j];
      r.argmax_j = j;
    }
  }
  r.a_k_event = r.max_slope > alpha;
  return r;
}

LocalizationEstimate estimate_p_ak(const PerturbedDensity& model, std::size_t n, double a,
                                   std::size_t k, double alpha, std::size_t replications,
                                   std::uint64_t seed, Conditioning conditioning) {
  require(replications >= 1, ErrorCode::kInvalidArgument, "need at least one replication");
  require(k >= 1 && k <= n, ErrorCode::kBadWindow, "window length must lie in [1, n]");
  const PathSimulator sim(model, n, a, conditioning);
  std::vector<char> hit(replications);
  numerics::parallel_for(replications, [&](std::size_t r) {
    hit[r] = detect_segments(sim.draw(derive_seed(seed, r)), k, alpha).a_k_event;
  });
  double count = 0.0;
  for (char h : hit) count += h ? 1.0 : 0.0;
  LocalizationEstimate est;
  est.replications = replications;
  est.n_eff = static_cast<double>(replications);
  est.p_hat = count / est.n_eff;
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / est.n_eff);
  return est;
}

}  // namespace stretchwalk
