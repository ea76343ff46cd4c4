/*
 * Copyright 2026 The aicarbon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aicarbon/lifecycle.hpp"
#include "aicarbon/scenario.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace aicarbon {
namespace {

CarbonBreakdown split_baseline(double embodied, double operational) {
  CarbonBreakdown b;
  b.phases.push_back({PhaseKind::OfflineTraining, 1.0, {operational, 0.0, operational}, embodied, false});
  return b;
}

TEST(UtilizationSweep, ThreefoldAtEightyPercent) {
  const auto b = split_baseline(30.0, 70.0);
  const std::vector<double> targets{0.267, 0.534, 0.80};
  const auto s = utilization_sweep(b, 0.267, targets);
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(s.rows[0].ratio, 1.0);
  EXPECT_NEAR(s.rows[1].ratio, 0.5, 1e-12);
  EXPECT_NEAR(s.rows[2].ratio, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(s.rows[2].embodied_kgco2e / 30.0, s.rows[2].ratio, 1e-12);
}

TEST(UtilizationSweep, ConservationAcrossDenseSweep) {
  const auto b = split_baseline(123.0, 456.0);
  std::vector<double> targets;
  for (int i = 1; i <= 100; ++i) targets.push_back(i / 100.0);
  const auto s = utilization_sweep(b, 0.3, targets);
  for (const auto& r : s.rows) EXPECT_NEAR(r.ratio * r.axis, 0.3, 1e-12);
}

TEST(UtilizationSweep, RejectsOutOfRangeTargets) {
  const auto b = split_baseline(1.0, 1.0);
  const std::vector<double> zero{0.0};
  EXPECT_THROW(utilization_sweep(b, 0.3, zero), Error);
  const std::vector<double> ok{0.5};
  EXPECT_THROW(utilization_sweep(b, 0.0, ok), Error);
}

TEST(RenewableSweep, HalvesAtFiveSevenths) {
  const auto b = split_baseline(30.0, 70.0);
  const std::vector<double> fr{0.0, 5.0 / 7.0, 1.0};
  const auto s = renewable_sweep(b, fr);
  EXPECT_DOUBLE_EQ(s.rows[0].ratio, 1.0);
  EXPECT_NEAR(s.rows[1].ratio, 0.5, 1e-12);
  EXPECT_NEAR(s.rows[2].ratio, 0.3, 1e-12);
  EXPECT_DOUBLE_EQ(s.rows[2].embodied_kgco2e, 30.0);
  EXPECT_NEAR(renewable_fraction_for_ratio(b, 0.5), 5.0 / 7.0, 1e-12);
}

TEST(RenewableSweep, AffineWithOperationalShareSlope) {
  const auto b = split_baseline(25.0, 75.0);
  std::vector<double> fr;
  for (int i = 0; i <= 20; ++i) fr.push_back(i / 20.0);
  const auto s = renewable_sweep(b, fr);
  for (const auto& r : s.rows) EXPECT_NEAR(r.ratio, 1.0 - 0.75 * r.axis, 1e-12);
}

TEST(Pareto, HandExample) {
  const std::vector<ScalingPoint> pts{{1, 1, 1.0, 1.0}, {1, 2, 2.0, 0.5}, {1, 3, 3.0, 0.6}};
  EXPECT_EQ(pareto_indices(pts), (std::vector<std::size_t>{0, 1}));
}

TEST(Pareto, SingleAndDuplicate) {
  const std::vector<ScalingPoint> one{{1, 1, 2.0, 0.3}};
  EXPECT_EQ(pareto_frontier(one), one);
  const std::vector<ScalingPoint> dup{{1, 1, 2.0, 0.3}, {2, 2, 2.0, 0.3}};
  const auto f = pareto_frontier(dup);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].data_scale, 1.0);
}

TEST(Pareto, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> n(1, 120);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = oracle::random_points(rng, n(rng));
    EXPECT_EQ(pareto_indices(pts), oracle::brute_force_frontier(pts)) << "trial " << trial;
  }
}

TEST(PowerLaw, RecoversSyntheticExponent) {
  std::vector<ScalingPoint> pts;
  for (double e : {0.5, 1.0, 2.0, 8.0, 40.0}) pts.push_back({1, 1, e, 1.0 * std::pow(e, -0.003)});
  const auto fit = powerlaw_fit(pts);
  EXPECT_NEAR(fit.exponent, 0.003, 1e-6);
  EXPECT_NEAR(fit.coefficient, 1.0, 1e-9);
  EXPECT_NEAR(fit.residual, 0.0, 1e-20);
}

TEST(PowerLaw, TwoPointsFlatAndRescaled) {
  const std::vector<ScalingPoint> two{{1, 1, 1.0, 0.9}, {1, 1, 4.0, 0.8}};
  EXPECT_NEAR(powerlaw_fit(two).residual, 0.0, 1e-24);
  const std::vector<ScalingPoint> flat{{1, 1, 1.0, 0.5}, {1, 1, 3.0, 0.5}, {1, 1, 9.0, 0.5}};
  EXPECT_EQ(powerlaw_fit(flat).exponent, 0.0);
  auto scaled = two;
  for (auto& p : scaled) p.energy_per_step *= 37.0;
  EXPECT_NEAR(powerlaw_fit(scaled).exponent, powerlaw_fit(two).exponent, 1e-12);
}

TEST(PowerLaw, RejectsDegenerateInput) {
  const std::vector<ScalingPoint> one{{1, 1, 1.0, 0.9}};
  EXPECT_THROW(powerlaw_fit(one), Error);
  const std::vector<ScalingPoint> bad{{1, 1, 1.0, 0.9}, {1, 1, -2.0, 0.8}};
  EXPECT_THROW(powerlaw_fit(bad), Error);
  const std::vector<ScalingPoint> same{{1, 1, 2.0, 0.9}, {1, 1, 2.0, 0.8}};
  EXPECT_THROW(powerlaw_fit(same), Error);
}

TEST(Compare, RatioAndDelta) {
  const ScalingPoint a{1, 1, 2.0, 0.5};
  const auto same = compare_scaling(a, a);
  EXPECT_EQ(same.energy_ratio, 1.0);
  EXPECT_EQ(same.error_delta, 0.0);
  const auto half = compare_scaling(a, ScalingPoint{1, 1, 1.0, 0.6});
  EXPECT_DOUBLE_EQ(half.energy_ratio, 0.5);
  EXPECT_NEAR(half.error_delta, -0.1, 1e-15);
}

}  // namespace
}  // namespace aicarbon
