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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "core/errors.hpp"
#include "test_oracles.hpp"

namespace stretchwalk {
namespace {

using testing::GridCdf;
using testing::ks_distance;
using testing::simpson;

TEST(NormalizeTest, PureExponentialHasUnitConstant) {
  const auto n = normalize(ExponentModel::power(1.0), NoPerturbation{});
  EXPECT_NEAR(n.c, 1.0, 1e-10);
}

TEST(NormalizeTest, WeibullConstantIsShape) {
  const auto n = normalize(ExponentModel::weibull(3.0), NoPerturbation{});
  EXPECT_NEAR(n.c, 3.0, 3.0 * 1e-8);
}

TEST(NormalizeTest, GaussianHalfLineMatchesSimpsonOracle) {
  const double oracle_mass = simpson([](double x) { return std::exp(-x * x); }, 0.0, 12.0);
  EXPECT_NEAR(oracle_mass, std::sqrt(std::numbers::pi) / 2.0, 1e-12);
  const auto n = normalize(ExponentModel::power(2.0), NoPerturbation{});
  EXPECT_NEAR(n.c, 1.0 / oracle_mass, 1e-8 / oracle_mass);
  EXPECT_NEAR(n.c, 1.128379, 1e-6);
}

TEST(NormalizeTest, MassAndTailInvariantsForPresets) {
  for (const auto& m : preset_models()) {
    // Start just inside the support: the density at 0 is a limit value.
    const double mass = simpson([&](double x) { return std::exp(m.log_density_unchecked(x)); },
                                1e-12, m.support_cap());
    EXPECT_GE(mass, 1.0 - 1e-6) << m.describe();
    EXPECT_LE(mass, 1.0 + 1e-9) << m.describe();
    EXPECT_LT(m.log_tail_mass(), std::log(1e-12)) << m.describe();
  }
}

TEST(NormalizeTest, NonIncreasingExponentIsRejected) {
  // g decreasing at the end of its grid.
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> g{10, 8, 6.5, 5.5, 5, 4.8};
  EXPECT_THROW(
      {
        try {
          (void)ExponentModel::tabulated(x, g);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kInvalidModel);
          throw;
        }
      },
      Error);
}

TEST(LogDensityTest, WeibullAtOne) {
  const auto m = PerturbedDensity::create(ExponentModel::weibull(3.0));
  EXPECT_NEAR(m.log_density(1.0), std::log(3.0) - 1.0, 1e-8);
}

TEST(LogDensityTest, GaussianHalfLineAtHalf) {
  const auto m = PerturbedDensity::create(ExponentModel::power(2.0));
  EXPECT_NEAR(m.log_density(0.5), std::log(2.0 / std::sqrt(std::numbers::pi)) - 0.25, 1e-8);
}

TEST(LogDensityTest, NonPositiveIsOutOfSupport) {
  for (const auto& m : preset_models()) {
    for (double x : {0.0, -1.0}) {
      try {
        (void)m.log_density(x);
        ADD_FAILURE() << "expected OutOfSupport";
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kOutOfSupport);
      }
    }
  }
}

TEST(LogDensityTest, UnperturbedIsExactlyLogCMinusG) {
  const auto m = PerturbedDensity::create(ExponentModel::power(3.0));
  for (double x : {0.1, 0.7, 1.3, 2.9}) {
    EXPECT_EQ(m.log_density(x), m.log_c() - m.base().value(x));
  }
}

TEST(PerturbationTest, EnvelopeHoldsOnRandomProbes) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(1e-3, 20.0);
  for (const auto& m : preset_models()) {
    if (!m.perturbed()) continue;
    for (int i = 0; i < 5000; ++i) {
      const double x = unif(gen);
      EXPECT_LE(std::fabs(m.q(x)), m.envelope(x) + 1e-15) << m.describe() << " x=" << x;
      if (x >= m.envelope_threshold()) {
        EXPECT_LE(m.envelope(x),
                  m.envelope_constant() * std::log(m.base().value(x)) + 1e-12)
            << m.describe() << " x=" << x;
      }
    }
  }
}

TEST(PerturbationTest, LambdaAboveOneIsInvalid) {
  EXPECT_THROW((void)PerturbedDensity::create(ExponentModel::power(2.0), SinPerturbation{2.0}),
               Error);
}

TEST(ExponentModelTest, WeibullShapeMustExceedTwo) {
  EXPECT_THROW((void)ExponentModel::weibull(2.0), Error);
}

TEST(ExponentModelTest, PresetInvariantsHold) {
  for (const auto& g : {ExponentModel::power(1.5), ExponentModel::power(3.0),
                        ExponentModel::exponential(), ExponentModel::weibull(3.0)}) {
    const auto inv = probe_invariants(g, 50.0);
    EXPECT_TRUE(inv.convex) << g.name();
    EXPECT_TRUE(inv.increasing) << g.name();
    EXPECT_TRUE(inv.superlinear) << g.name();
  }
  EXPECT_FALSE(probe_invariants(ExponentModel::power(1.0), 50.0).superlinear);
}

TEST(ExponentModelTest, RemainderMatchesDirectDifferenceWhereSafe) {
  for (const auto& g : {ExponentModel::power(1.5), ExponentModel::power(3.0),
                        ExponentModel::exponential(), ExponentModel::weibull(3.0)}) {
    for (double x : {1.0, 2.5, 4.0}) {
      for (double d : {-0.7, -0.1, 0.05, 0.9}) {
        const double direct = g.value(x + d) - g.value(x) - g.d1(x) * d;
        EXPECT_NEAR(g.remainder(x, d), direct, 1e-10 * (1.0 + std::fabs(g.value(x))))
            << g.name() << " x=" << x << " d=" << d;
      }
    }
  }
}

TEST(ExponentModelTest, RemainderIsAccurateAtHugeArguments) {
  // (a+d)^3 - a^3 - 3a^2 d = 3a d^2 + d^3 exactly.
  const auto g = ExponentModel::power(3.0);
  const double a = 1e8, d = 0.036;
  EXPECT_NEAR(g.remainder(a, d) / (3 * a * d * d + d * d * d), 1.0, 1e-12);
}

TEST(ExponentModelTest, TabulatedTracksAnalyticCube) {
  std::vector<double> x, gv;
  for (int i = 1; i <= 400; ++i) {
    x.push_back(0.01 * i);
    gv.push_back(std::pow(0.01 * i, 3));
  }
  const auto t = ExponentModel::tabulated(x, gv);
  for (double p : {0.5, 1.234, 3.3}) {
    EXPECT_NEAR(t.value(p), p * p * p, 1e-6);
    EXPECT_NEAR(t.d1(p), 3 * p * p, 1e-3);
    EXPECT_NEAR(t.d2(p), 6 * p, 1e-2);
  }
  // Convex continuation beyond the grid.
  EXPECT_GT(t.d2(10.0), 0.0);
}

TEST(ExponentModelTest, TabulatedRejectsConcaveData) {
  std::vector<double> x, gv;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(i);
    gv.push_back(std::sqrt(static_cast<double>(i)));
  }
  EXPECT_THROW((void)ExponentModel::tabulated(x, gv), Error);
}

TEST(SamplerTest, WeibullMeanMatchesMomentOracle) {
  const auto m = PerturbedDensity::create(ExponentModel::weibull(3.0));
  auto pdf = [](double x) { return 3 * x * x * std::exp(-x * x * x); };
  const double mean = simpson([&](double x) { return x * pdf(x); }, 0.0, 6.0);
  const double second = simpson([&](double x) { return x * x * pdf(x); }, 0.0, 6.0);
  EXPECT_NEAR(mean, std::tgamma(4.0 / 3.0), 1e-10);
  const double sd = std::sqrt(second - mean * mean);

  const std::size_t n = 100000;
  const auto draws = sample_unconditional(m, n, 12345);
  double sum = 0.0;
  for (double v : draws) sum += v;
  EXPECT_NEAR(sum / n, mean, 3.0 * sd / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(m.mean(), mean, 1e-9);
}

TEST(SamplerTest, ZeroDrawsIsEmpty) {
  const auto m = PerturbedDensity::create(ExponentModel::power(2.0));
  EXPECT_TRUE(sample_unconditional(m, 0, 1).empty());
}

TEST(SamplerTest, SameSeedIsBitIdentical) {
  for (const auto& m : preset_models()) {
    const auto a = sample_unconditional(m, 1000, 99);
    const auto b = sample_unconditional(m, 1000, 99);
    EXPECT_EQ(a, b) << m.describe();
    EXPECT_NE(a, sample_unconditional(m, 1000, 100)) << m.describe();
  }
}

TEST(SamplerTest, KolmogorovSmirnovAgainstQuadratureCdf) {
  for (const auto& m : preset_models()) {
    const GridCdf cdf([&](double x) { return std::exp(m.log_density_unchecked(x)); }, 0.0,
                      m.support_cap());
    const auto draws = sample_unconditional(m, 100000, 2024);
    EXPECT_LT(ks_distance(draws, cdf), 0.01) << m.describe();
  }
}

}  // namespace
}  // namespace stretchwalk
