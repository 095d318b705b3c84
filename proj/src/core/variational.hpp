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
#include <functional>
#include <utility>
#include <vector>

#include "core/density.hpp"

namespace stretchwalk {

/// The band event: n summands, threshold a for the mean, half-width eps.
struct BandEvent {
  std::size_t n = 2;
  double a = 0.0;
  double eps = 0.0;
};

/// Throws InvalidArgument unless n >= 2, 0 <= eps < a and a > X.
void validate_band(const ExponentModel& g, const BandEvent& ev);

struct LocalizationBounds {
  double f_g1 = 0.0;   // one coordinate at a+eps, the rest at a - eps/(n-1)
  double f_g2 = 0.0;   // one coordinate at a-eps, the rest at a + eps/(n-1)
  double i_icc = 0.0;  // min(f_g1, f_g2)
  double i_c = 0.0;    // n g(a)
  double H = 0.0;      // i_icc - i_c
  double G = 0.0;      // g(a + 1/g(a)) - g(a)
  double tau = 0.0;    // n G
};

/// f_g1, f_g2 and derived quantities. H and G are assembled from
/// cancellation-free increments so they stay accurate when g(a) is huge.
LocalizationBounds closed_form_bounds(const ExponentModel& g, const BandEvent& ev);

/// k g(a+eps) + (n-k) g(a - k eps/(n-k)) for k in 1..n-1.
double minimizer_profile(const ExponentModel& g, const BandEvent& ev, std::size_t k);

enum class Region { kC, kAcapC, kBcapC, kIccC };

struct BruteForceOptions {
  std::size_t base_grid = 64;         // points per axis at the finest certified level
  std::size_t max_levels = 8;         // refinements before giving up
  std::size_t budget = 40'000'000;    // grid points per level
  std::size_t candidates = 6;         // grid minima handed to local refinement
  double rel_tol = 1e-5;              // agreement between consecutive levels
};

struct BruteForceResult {
  double value = 0.0;
  std::vector<double> argmin;  // full n-vector
  std::size_t grid = 0;        // points per axis at the accepting level
};

/// Infimum of sum phi(x_i) over the region by grid search and local pattern
/// refinement on the box [1e-3, a + n eps + 5]^n. The value is accepted once
/// the grid and the halved grid give the same answer to `rel_tol`.
BruteForceResult brute_force_infimum(const std::function<double(double)>& phi,
                                     const BandEvent& ev, Region region,
                                     const BruteForceOptions& opts = {});

/// Same with phi = g + q of the model.
BruteForceResult brute_force_infimum(const PerturbedDensity& model, const BandEvent& ev,
                                     Region region, const BruteForceOptions& opts = {});

/// Convex minorant of g - M, glued from the tangent line s at y3 and
/// r = g - N log g beyond it.
class PiecewiseMinorant {
 public:
  PiecewiseMinorant(ExponentModel g, double N, double y0, double y1, double y2, double y3);

  double r(double x) const;
  double r_d1(double x) const;
  double s(double x) const;
  double h(double x) const { return x >= y3_ ? r(x) : s(x); }
  /// One-sided derivatives of h at x.
  double h_d1_left(double x) const { return x > y3_ ? r_d1(x) : r_d1(y3_); }
  double h_d1_right(double x) const { return x >= y3_ ? r_d1(x) : r_d1(y3_); }

  double N() const { return N_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  double y2() const { return y2_; }
  double y3() const { return y3_; }
  const ExponentModel& g() const { return g_; }

 private:
  ExponentModel g_;
  double N_, y0_, y1_, y2_, y3_;
};

/// Builds the minorant on a grid of `points` nodes over (0, x_max]
/// (x_max <= 0 picks g^{-1}(1000)). Throws EnvelopeViolated if M <= N log g
/// fails at the end of the grid, ThresholdNotFound if y3 is off the grid.
PiecewiseMinorant convex_minorant(const ExponentModel& g,
                                  const std::function<double(double)>& M, double N,
                                  double x_max = 0.0, std::size_t points = 10000);
PiecewiseMinorant convex_minorant(const PerturbedDensity& model, double x_max = 0.0,
                                  std::size_t points = 10000);

/// [n h(a), n g(a) + n N log g(a)]; for an unperturbed model both ends are n g(a).
std::pair<double, double> ic_interval(const PerturbedDensity& model, const BandEvent& ev);

/// Lower bound on log P(S/n >= a).
double log_prob_c_lower(const PerturbedDensity& model, const BandEvent& ev);

/// Upper bound on log P(some X_i outside (a-eps, a+eps), S/n >= a).
double log_prob_icc_upper(const PerturbedDensity& model, const BandEvent& ev);

}  // namespace stretchwalk
