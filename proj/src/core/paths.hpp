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
#include <memory>
#include <string>
#include <vector>

#include "core/density.hpp"
#include "core/sampler.hpp"

namespace stretchwalk {

enum class Conditioning { kEndAtLeast, kEndEquals, kNone };

const char* conditioning_name(Conditioning c);

struct Trajectory {
  std::vector<double> increments;
  std::vector<double> partial_sums;  // partial_sums[i] = X_1 + ... + X_{i+1}
  Conditioning conditioning = Conditioning::kNone;
  std::string note;                  // set when a fallback sampler was used
};

Trajectory make_trajectory(std::vector<double> increments, Conditioning conditioning);

/// Draws paths of length n with a fixed conditioning; the tilted proposal
/// law is built once and reused across draws.
class PathSimulator {
 public:
  PathSimulator(const PerturbedDensity& model, std::size_t n, double a,
                Conditioning conditioning);

  /// The increment multiset comes from rejection sampling (EndAtLeast, with
  /// a Gibbs fallback at S = na once the proposal budget runs out), from the
  /// fixed-sum Gibbs chain (EndEquals) or i.i.d. (None). The increments are
  /// then put in uniformly random order.
  Trajectory draw(std::uint64_t seed) const;

 private:
  const PerturbedDensity& model_;
  std::size_t n_;
  double a_;
  Conditioning conditioning_;
  std::shared_ptr<const TiltedLaw> law_;
};

Trajectory simulate_conditioned_path(const PerturbedDensity& model, std::size_t n, double a,
                                     Conditioning conditioning, std::uint64_t seed);

/// Delta_{j,k} = (S_{j+k} - S_j) / k for j = 0..n-k, with S_0 = 0.
/// Throws BadWindow unless 1 <= k <= n.
std::vector<double> sliding_slopes(const Trajectory& traj, std::size_t k);

struct SegmentReport {
  std::size_t k = 0;
  double alpha = 0.0;
  std::vector<double> slopes;
  std::size_t argmax_j = 0;  // smallest j attaining the maximum
  double max_slope = 0.0;
  bool a_k_event = false;    // max_slope > alpha
};

SegmentReport detect_segments(const Trajectory& traj, std::size_t k, double alpha);

/// Frequency of A_k over `replications` paths with binomial standard error.
/// Replication r uses derive_seed(seed, r).
LocalizationEstimate estimate_p_ak(const PerturbedDensity& model, std::size_t n, double a,
                                   std::size_t k, double alpha, std::size_t replications,
                                   std::uint64_t seed,
                                   Conditioning conditioning = Conditioning::kEndAtLeast);

}  // namespace stretchwalk
