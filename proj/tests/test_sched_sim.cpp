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
#include <map>
#include <random>

#include "aicarbon/sched_sim.hpp"
#include "oracles.hpp"

namespace aicarbon {
namespace {

HardwarePlatform unit_node() { return HardwarePlatform{"unit", 1.0, 2000.0, 35040.0, true}; }

RegionModel region(std::string name, std::vector<IntensitySample> samples, int capacity,
                   HardwarePlatform platform = unit_node()) {
  return RegionModel{std::move(name), CarbonIntensitySeries{std::move(samples), AccountingMode::LocationBased},
                     capacity, std::move(platform)};
}

Job job(std::string id, double hours, int nodes, double arrival, double slack) {
  return Job{std::move(id), hours * nodes / 24.0, nodes, arrival, slack};
}

RegionModel toy_region() { return region("toy", {{0.0, 500.0}, {1.0, 100.0}}, 1); }

// Replays a report against the instance and checks every feasibility invariant.
void expect_feasible(const ScheduleReport& rep, const std::vector<Job>& jobs, const std::vector<RegionModel>& regions) {
  ASSERT_EQ(rep.placements.size(), jobs.size());
  std::map<std::pair<std::size_t, std::int64_t>, int> use;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& p = rep.placements[i];
    EXPECT_EQ(p.job_id, jobs[i].id);
    EXPECT_GE(static_cast<double>(p.start_h), jobs[i].arrival_h);
    EXPECT_LE(static_cast<double>(p.start_h), jobs[i].arrival_h + jobs[i].slack_h);
    EXPECT_EQ(p.end_h - p.start_h, occupied_slots(jobs[i]));
    for (auto s = p.start_h; s < p.end_h; ++s) use[{p.region, s}] += p.nodes;
  }
  for (const auto& [key, n] : use) EXPECT_LE(n, regions[key.first].capacity);
}

TEST(Lognormal, QuantileInversion) {
  const auto a = lognormal_from_quantiles(1.5, 24.0);
  EXPECT_NEAR(a.mu, 0.405465, 1e-4);
  EXPECT_NEAR(a.sigma, 1.19182, 1e-4);
  const auto b = lognormal_from_quantiles(2.96, 125.0);
  EXPECT_NEAR(b.mu, 1.08519, 1e-4);
  EXPECT_NEAR(b.sigma, 1.60908, 1e-4);
  EXPECT_NEAR(lognormal_from_quantiles(3.0, 3.0 * std::exp(kZ99)).sigma, 1.0, 1e-15);
  EXPECT_THROW(lognormal_from_quantiles(24.0, 1.5), Error);
  EXPECT_THROW(lognormal_from_quantiles(0.0, 1.5), Error);
}

TEST(Sampling, DeterministicAndEmpty) {
  const auto p = lognormal_from_quantiles(1.5, 24.0);
  EXPECT_EQ(sample_jobs(p, 10, 42), sample_jobs(p, 10, 42));
  EXPECT_NE(sample_jobs(p, 10, 42), sample_jobs(p, 10, 43));
  EXPECT_TRUE(sample_jobs(p, 0, 42).empty());
}

TEST(Sampling, EmpiricalQuantilesNearTargets) {
  const auto jobs = sample_jobs(lognormal_from_quantiles(1.5, 24.0), 100'000, 7);
  std::vector<double> days;
  for (const auto& j : jobs) {
    days.push_back(j.gpu_days);
    EXPECT_GE(j.arrival_h, 0.0);
    EXPECT_LT(j.arrival_h, 168.0);
  }
  EXPECT_NEAR(empirical_quantile(days, 0.50), 1.5, 0.075);
  const double p99 = empirical_quantile(days, 0.99);
  EXPECT_GE(p99, 22.8);
  EXPECT_LE(p99, 25.2);
}

TEST(Simulate, ToyInstanceFiveFold) {
  const std::vector<Job> jobs{job("toy", 1.0, 1, 0.0, 1.0)};
  const std::vector<RegionModel> regions{toy_region()};
  const auto imm = simulate(jobs, regions, Policy::immediate());
  const auto low = simulate(jobs, regions, Policy::lowest_window());
  EXPECT_DOUBLE_EQ(imm.operational_kgco2e, 0.5);
  EXPECT_DOUBLE_EQ(low.operational_kgco2e, 0.1);
  EXPECT_DOUBLE_EQ(imm.operational_kgco2e / low.operational_kgco2e, 5.0);
  const auto t = policy_tradeoff(imm, low);
  EXPECT_DOUBLE_EQ(t.operational_savings_kgco2e, 0.4);
  EXPECT_DOUBLE_EQ(t.embodied_overhead_kgco2e, 0.0);
  EXPECT_DOUBLE_EQ(t.net_kgco2e, 0.4);
  const auto same = policy_tradeoff(low, low);
  EXPECT_EQ(same.net_kgco2e, 0.0);
  EXPECT_EQ(same.operational_savings_kgco2e, 0.0);
}

TEST(Simulate, OverprovisionAmortization) {
  const std::vector<RegionModel> regions{toy_region()};
  const std::vector<int> peak{2};
  const std::vector<int> ref{1};
  EXPECT_NEAR(overprovision_embodied(regions, peak, ref, 1.0), 2000.0 / 35040.0, 1e-12);
  EXPECT_NEAR(overprovision_embodied(regions, peak, ref, 1.0), 0.057, 0.0005);
  EXPECT_EQ(overprovision_embodied(regions, ref, peak, 10.0), 0.0);
}

TEST(Simulate, DeferralRaisesPeakAndChargesEmbodied) {
  // Two jobs arrive an hour apart; shifting the first into the clean hour stacks them.
  const std::vector<Job> jobs{job("a", 1.0, 1, 0.0, 1.0), job("b", 1.0, 1, 1.0, 0.0)};
  const std::vector<RegionModel> regions{region("r", {{0.0, 500.0}, {1.0, 100.0}}, 2)};
  const auto imm = simulate(jobs, regions, Policy::immediate());
  const auto low = simulate(jobs, regions, Policy::lowest_window());
  EXPECT_EQ(imm.peak_nodes, 1);
  EXPECT_EQ(low.peak_nodes, 2);
  EXPECT_EQ(low.reference_peak_by_region, std::vector<int>{1});
  EXPECT_NEAR(low.overprovision_embodied_kgco2e, 2000.0 * low.horizon_h / 35040.0, 1e-12);
  const auto t = policy_tradeoff(imm, low);
  EXPECT_NEAR(t.net_kgco2e, t.operational_savings_kgco2e - t.embodied_overhead_kgco2e, 1e-15);
}

TEST(Simulate, ConstantIntensityIsPolicyInvariant) {
  std::mt19937_64 rng(5);
  const auto params = lognormal_from_quantiles(0.05, 0.4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto jobs = sample_jobs(params, 12, rng(), {2, 24.0, 12.0});
    const std::vector<RegionModel> regions{region("a", {{0.0, 321.0}}, 64), region("b", {{0.0, 321.0}}, 64)};
    const auto imm = simulate(jobs, regions, Policy::immediate());
    EXPECT_EQ(simulate(jobs, regions, Policy::lowest_window()).operational_kgco2e, imm.operational_kgco2e);
    EXPECT_EQ(simulate(jobs, regions, Policy::threshold_delay(100.0)).operational_kgco2e, imm.operational_kgco2e);
  }
}

TEST(Simulate, ZeroSlackReproducesImmediate) {
  std::vector<Job> jobs;
  for (int i = 0; i < 6; ++i) jobs.push_back(job("j" + std::to_string(i), 1.0 + i % 3, 1, double(i), 0.0));
  const std::vector<RegionModel> regions{region("r", {{0.0, 400.0}, {2.0, 50.0}, {5.0, 700.0}}, 8)};
  const auto imm = simulate(jobs, regions, Policy::immediate());
  for (auto p : {Policy::lowest_window(), Policy::threshold_delay(10.0), Policy::threshold_delay(1e9)}) {
    const auto r = simulate(jobs, regions, p);
    EXPECT_EQ(r.placements, imm.placements);
    EXPECT_EQ(r.operational_kgco2e, imm.operational_kgco2e);
  }
}

TEST(Simulate, ThresholdBounds) {
  const std::vector<Job> jobs{job("a", 2.0, 1, 0.0, 5.0), job("b", 1.0, 1, 3.0, 2.0)};
  const std::vector<RegionModel> regions{region("r", {{0.0, 300.0}, {2.0, 500.0}, {4.0, 200.0}}, 4)};
  const auto imm = simulate(jobs, regions, Policy::immediate());
  EXPECT_EQ(simulate(jobs, regions, Policy::threshold_delay(500.0)).placements, imm.placements);
  const auto wait = simulate(jobs, regions, Policy::threshold_delay(10.0));
  EXPECT_EQ(wait.placements[0].start_h, 5);
  EXPECT_EQ(wait.placements[1].start_h, 5);
  const auto pick = simulate(jobs, regions, Policy::threshold_delay(250.0));
  EXPECT_EQ(pick.placements[0].start_h, 4);
}

TEST(Simulate, InfeasibleNamesFirstUnplaceableJob) {
  const std::vector<Job> jobs{job("fits", 2.0, 1, 0.0, 0.0), job("blocked", 1.0, 1, 1.0, 0.0)};
  const std::vector<RegionModel> regions{region("r", {{0.0, 100.0}}, 1)};
  try {
    simulate(jobs, regions, Policy::immediate());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'blocked'"), std::string::npos);
  }
  EXPECT_THROW(simulate(std::vector<Job>{job("wide", 1.0, 2, 0.0, 3.0)}, regions, Policy::lowest_window()), Error);
}

TEST(Simulate, MismatchedJobSetsRejected) {
  const std::vector<RegionModel> regions{toy_region()};
  const auto a = simulate(std::vector<Job>{job("x", 1.0, 1, 0.0, 1.0)}, regions, Policy::immediate());
  const auto b = simulate(std::vector<Job>{job("y", 1.0, 1, 0.0, 1.0)}, regions, Policy::immediate());
  EXPECT_THROW(policy_tradeoff(a, b), Error);
}

TEST(Simulate, LowestWindowMatchesExhaustiveOracle) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = oracle::small_instance(rng);
    const auto rep = simulate(inst.jobs, inst.regions, Policy::lowest_window(), {inst.pue, std::nullopt});
    expect_feasible(rep, inst.jobs, inst.regions);
    EXPECT_EQ(rep.operational_kgco2e, oracle::exhaustive_minimum(inst.jobs, inst.regions, inst.pue)) << "trial " << trial;
  }
}

TEST(Simulate, EveryPolicyOutputIsFeasible) {
  std::mt19937_64 rng(8);
  const auto params = lognormal_from_quantiles(0.1, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto jobs = sample_jobs(params, 30, rng(), {1 + trial % 3, 48.0, 12.0});
    std::vector<IntensitySample> a;
    std::vector<IntensitySample> b;
    for (int h = 0; h < 96; ++h) {
      a.push_back({double(h), 100.0 + 300.0 * std::sin(h / 3.0) * std::sin(h / 3.0)});
      b.push_back({double(h), 250.0 + (h % 7) * 20.0});
    }
    const std::vector<RegionModel> regions{region("a", a, 12), region("b", b, 8)};
    for (auto p : {Policy::immediate(), Policy::threshold_delay(200.0), Policy::lowest_window()}) {
      const auto rep = simulate(jobs, regions, p);
      expect_feasible(rep, jobs, regions);
      EXPECT_EQ(rep, simulate(jobs, regions, p));
    }
  }
}

}  // namespace
}  // namespace aicarbon
