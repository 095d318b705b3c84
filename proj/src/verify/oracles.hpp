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

// Reference probabilities by nested one-dimensional quadrature. They are
// only practical for n <= 3 and serve to check the analytic bounds.

#include <cstddef>
#include <vector>

#include "core/density.hpp"
#include "core/variational.hpp"

namespace stretchwalk::verify {

/// log P(X_1 + ... + X_m >= t with every X_i in [lo, hi]) for m in 1..3.
/// The three-term case integrates against a tabulated two-term tail, built
/// on first use; an instance is not safe to share between threads.
class SumTailOracle {
 public:
  SumTailOracle(const PerturbedDensity& model, double lo, double hi,
                std::size_t cells = 20000);

  double log_tail(std::size_t m, double t) const;

 private:
  double log_single(double t) const;
  double log_pair(double t, int panels) const;
  double log_pair_table(double t) const;

  const PerturbedDensity& model_;
  double lo_, hi_, h_, shift_;
  std::vector<double> tail_;  // shifted mass of [node j, hi]
  mutable std::vector<double> pair_;
};

/// log P(S_n >= n a), n <= 3.
double quadrature_log_prob_c(const PerturbedDensity& model, const BandEvent& ev);
/// log P(S_n >= n a and all X_i in (a - eps, a + eps)), n <= 3.
double quadrature_log_prob_ic(const PerturbedDensity& model, const BandEvent& ev);
/// log P(S_n >= n a and some X_i outside the band), n <= 3.
double quadrature_log_prob_icc(const PerturbedDensity& model, const BandEvent& ev);

/// log P(X > x), integrating the density beyond the normalization cap.
double quadrature_log_survival(const PerturbedDensity& model, double x);

}  // namespace stretchwalk::verify
