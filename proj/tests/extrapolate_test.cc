/* Copyright 2026 The Wavecast Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "wavecast/extrapolate.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.h"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using testing::RelativeError;

TEST(ExtrapolateTest, ExactLineIsRecovered) {
  const std::vector<BatchPoint> points = {{8, 21}, {16, 37}, {32, 69}};
  const Extrapolation e = ExtrapolateBatch(points, 100);
  EXPECT_LT(RelativeError(e.fit.slope, 2.0), 1e-12);
  EXPECT_LT(RelativeError(e.fit.intercept, 5.0), 1e-12);
  EXPECT_LT(RelativeError(e.seconds, 205.0), 1e-12);
  EXPECT_DOUBLE_EQ(e.fit.r_squared, 1.0);
  EXPECT_FALSE(e.interpolated);
  EXPECT_TRUE(e.warnings.empty());
  EXPECT_EQ(e.fit.points, 3);
}

TEST(ExtrapolateTest, TwoPointsHaveNoStandardError) {
  const std::vector<BatchPoint> points = {{1, 3}, {2, 5}};
  const LinearFit fit = FitLine(points);
  EXPECT_DOUBLE_EQ(fit.slope, 2.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 1.0);
  EXPECT_TRUE(std::isnan(fit.slope_stderr));
  EXPECT_TRUE(std::isnan(fit.intercept_stderr));
}

TEST(ExtrapolateTest, NeedsTwoDistinctBatchSizes) {
  const std::vector<BatchPoint> one = {{8, 1}};
  EXPECT_THROW(FitLine(one), InputError);
  const std::vector<BatchPoint> same = {{8, 1}, {8, 2}};
  EXPECT_THROW(FitLine(same), InputError);
  const std::vector<BatchPoint> none;
  EXPECT_THROW(ExtrapolateBatch(none, 10), InputError);
}

// Smallest k with P(Binomial(n, p) > k) < alpha.
int BinomialUpperBound(int n, double p, double alpha) {
  double pmf = std::pow(1 - p, n);
  double cdf = pmf;
  int k = 0;
  while (1 - cdf >= alpha) {
    pmf *= (n - k) / (k + 1.0) * p / (1 - p);
    cdf += pmf;
    ++k;
  }
  return k;
}

// Closed-form OLS standard deviations with the generating noise level. Each
// estimate lands outside 3 sigma with probability 0.27%, so the count of
// misses over the trials is held to a binomial bound, and the trial means
// must sit within 3 standard errors of the truth.
TEST(ExtrapolateTest, NoisyEstimatesWithinThreeSigma) {
  const std::vector<double> xs = {8, 16, 32, 64, 128, 256};
  const double slope = 2e-3;
  const double intercept = 5e-3;
  const double sigma = 1e-4;
  const int trials = 100;
  double mean_x = 0;
  for (double x : xs) mean_x += x;
  mean_x /= xs.size();
  double sxx = 0;
  for (double x : xs) sxx += (x - mean_x) * (x - mean_x);
  const double sd_slope = sigma / std::sqrt(sxx);
  const double sd_intercept =
      sigma * std::sqrt(1.0 / xs.size() + mean_x * mean_x / sxx);
  int misses = 0;
  double slope_sum = 0;
  double intercept_sum = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<BatchPoint> points;
    for (double x : xs) points.push_back({x, slope * x + intercept + noise(rng)});
    const LinearFit fit = FitLine(points);
    misses += std::abs(fit.slope - slope) > 3 * sd_slope;
    misses += std::abs(fit.intercept - intercept) > 3 * sd_intercept;
    slope_sum += fit.slope;
    intercept_sum += fit.intercept;
  }
  const double p_miss = std::erfc(3 / std::sqrt(2.0));
  EXPECT_LE(misses, BinomialUpperBound(2 * trials, p_miss, 0.01));
  EXPECT_LE(std::abs(slope_sum / trials - slope), 3 * sd_slope / std::sqrt(trials));
  EXPECT_LE(std::abs(intercept_sum / trials - intercept),
            3 * sd_intercept / std::sqrt(trials));
}

TEST(ExtrapolateTest, BinomialBound) {
  EXPECT_EQ(BinomialUpperBound(200, std::erfc(3 / std::sqrt(2.0)), 0.01), 3);
  EXPECT_EQ(BinomialUpperBound(10, 0.0, 0.01), 0);
}

TEST(ExtrapolateTest, StandardErrorsMatchHandComputation) {
  const std::vector<BatchPoint> points = {{1, 1}, {2, 3}, {3, 2}, {4, 5}};
  const LinearFit fit = FitLine(points);
  // x mean 2.5, Sxx 5, Sxy 5.5 -> slope 1.1, intercept 2.75 - 2.75 = 0.
  EXPECT_NEAR(fit.slope, 1.1, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  // residuals -0.1, 0.8, -1.3, 0.6 -> SSE 2.7, s^2 = 1.35, SST 8.75.
  EXPECT_NEAR(fit.slope_stderr, std::sqrt(1.35 / 5), 1e-12);
  EXPECT_NEAR(fit.intercept_stderr, std::sqrt(1.35 * (0.25 + 6.25 / 5)), 1e-12);
  EXPECT_NEAR(fit.r_squared, 1 - 2.7 / 8.75, 1e-12);
}

TEST(ExtrapolateTest, PoorFitWarns) {
  const std::vector<BatchPoint> points = {{1, 1}, {2, 3}, {3, 2}, {4, 5}};
  const Extrapolation e = ExtrapolateBatch(points, 8);
  ASSERT_LT(e.fit.r_squared, kMinRSquared);
  ASSERT_EQ(e.warnings.size(), 1u);
  EXPECT_NE(e.warnings[0].find("R^2"), std::string::npos) << e.warnings[0];
}

TEST(ExtrapolateTest, TargetInsideRangeIsFlagged) {
  const std::vector<BatchPoint> points = {{8, 21}, {16, 37}, {32, 69}};
  const Extrapolation e = ExtrapolateBatch(points, 24);
  EXPECT_TRUE(e.interpolated);
  EXPECT_EQ(e.warnings.size(), 1u);
  EXPECT_DOUBLE_EQ(e.seconds, 53.0);
}

TEST(ExtrapolateTest, NonPositiveTimeIsAnError) {
  const std::vector<BatchPoint> points = {{8, 10}, {16, 6}, {32, 1}};
  EXPECT_THROW(ExtrapolateBatch(points, 1000), InputError);
}

}  // namespace
}  // namespace wavecast
