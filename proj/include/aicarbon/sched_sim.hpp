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
#pragma once

// Discrete-time carbon-aware batch scheduling.
//
// Time runs in one-hour slots; slot s covers [s, s + 1). Jobs are non-preemptible
// and stay in the region where they start. Each job is placed once, in arrival
// order, against the capacity left by the jobs placed before it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aicarbon/accounting.hpp"
#include "aicarbon/core.hpp"
#include "aicarbon/edge_fl.hpp"

namespace aicarbon {

/// Standard normal 99th-percentile deviate.
inline constexpr double kZ99 = 2.32635;

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Lognormal whose median is `p50` and 99th percentile is `p99`.
inline LognormalParams lognormal_from_quantiles(double p50, double p99) {
  if (!is_finite(p50) || !is_finite(p99) || !(p50 > 0.0) || !(p99 > p50)) {
    throw Error("lognormal_from_quantiles: require 0 < p50 < p99");
  }
  return {std::log(p50), std::log(p99 / p50) / kZ99};
}

struct Job {
  std::string id;
  double gpu_days = 0.0;  ///< accelerator demand
  int nodes = 1;
  double arrival_h = 0.0;
  double slack_h = 0.0;  ///< allowed start delay

  /// Wall-clock runtime when spread over `nodes`.
  double runtime_h() const noexcept { return gpu_days * 24.0 / static_cast<double>(nodes); }

  bool operator==(const Job&) const = default;
};

inline void validate_job(const Job& job) {
  if (!is_finite(job.gpu_days) || job.gpu_days <= 0.0) throw Error("job '" + job.id + "': gpu_days must be > 0");
  if (job.nodes < 1) throw Error("job '" + job.id + "': nodes must be >= 1");
  if (!is_finite(job.arrival_h)) throw Error("job '" + job.id + "': arrival_h must be finite");
  if (!is_finite(job.slack_h) || job.slack_h < 0.0) throw Error("job '" + job.id + "': slack_h must be >= 0");
}

/// Whole slots occupied by a job; the last may be partially used.
inline std::int64_t occupied_slots(const Job& job) {
  const double runtime = job.runtime_h();
  const auto whole = static_cast<std::int64_t>(std::floor(runtime));
  // Tolerate representation noise such as 24 * (1/24) landing a hair above 1.
  if (runtime - static_cast<double>(whole) <= 1e-9) return std::max<std::int64_t>(whole, 1);
  return whole + 1;
}

struct JobSampling {
  int nodes = 1;
  double horizon_h = 168.0;  ///< arrivals are uniform over whole hours in [0, horizon)
  double slack_h = 24.0;
};

/// Reproducible job list: lognormal GPU-days, uniform hourly arrivals.
inline std::vector<Job> sample_jobs(const LognormalParams& params, std::size_t count, std::uint64_t seed,
                                    const JobSampling& options = {}) {
  if (options.nodes < 1) throw Error("sample_jobs: nodes must be >= 1");
  if (!(options.horizon_h >= 1.0)) throw Error("sample_jobs: horizon must be >= 1 h");
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> gpu_days(params.mu, params.sigma);
  std::uniform_int_distribution<std::int64_t> arrival(0, static_cast<std::int64_t>(options.horizon_h) - 1);
  std::vector<Job> jobs;
  jobs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Job job;
    job.id = "job-" + std::to_string(i);
    job.gpu_days = gpu_days(rng);
    job.nodes = options.nodes;
    job.arrival_h = static_cast<double>(arrival(rng));
    job.slack_h = options.slack_h;
    jobs.push_back(std::move(job));
  }
  return jobs;
}

/// Nearest-rank empirical quantile.
inline double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("empirical_quantile: no values");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

struct RegionModel {
  std::string name;
  CarbonIntensitySeries intensity;
  int capacity = 1;  ///< concurrent nodes
  HardwarePlatform platform;

  bool operator==(const RegionModel&) const = default;
};

enum class PolicyKind { Immediate, ThresholdDelay, LowestWindow };

struct Policy {
  PolicyKind kind = PolicyKind::Immediate;
  double threshold_g_per_kwh = 0.0;  ///< ThresholdDelay only

  static Policy immediate() { return {PolicyKind::Immediate, 0.0}; }
  static Policy threshold_delay(double g_per_kwh) { return {PolicyKind::ThresholdDelay, g_per_kwh}; }
  static Policy lowest_window() { return {PolicyKind::LowestWindow, 0.0}; }

  bool operator==(const Policy&) const = default;
};

inline std::string to_string(const Policy& p) {
  switch (p.kind) {
    case PolicyKind::Immediate: return "immediate";
    case PolicyKind::ThresholdDelay: return "threshold_delay";
    case PolicyKind::LowestWindow: return "lowest_window";
  }
  return "unknown";
}

struct Placement {
  std::string job_id;
  std::size_t region = 0;
  std::int64_t start_h = 0;
  std::int64_t end_h = 0;  ///< exclusive slot bound
  int nodes = 1;
  double energy_kwh = 0.0;
  double operational_kgco2e = 0.0;
  double delay_h = 0.0;

  bool operator==(const Placement&) const = default;
};

struct ScheduleReport {
  std::string policy;
  std::vector<std::string> regions;
  std::vector<Placement> placements;  ///< in input job order
  double energy_kwh = 0.0;
  double operational_kgco2e = 0.0;
  int peak_nodes = 0;  ///< across all regions
  std::vector<int> peak_nodes_by_region;
  std::vector<int> reference_peak_by_region;  ///< peaks under Immediate placement
  double horizon_h = 0.0;
  double overprovision_embodied_kgco2e = 0.0;
  double mean_delay_h = 0.0;
  double max_delay_h = 0.0;
  std::int64_t makespan_end_h = 0;

  bool operator==(const ScheduleReport&) const = default;
};

struct SimulationOptions {
  double pue = 1.0;
  std::optional<double> horizon_h;  ///< embodied amortization horizon; defaults to the schedule span
};

namespace detail {

/// One region's per-slot intensity and node usage over a fixed slot range.
struct RegionGrid {
  std::int64_t first_slot = 0;
  std::vector<double> intensity;
  std::vector<int> usage;

  double intensity_at(std::int64_t slot) const { return intensity[static_cast<std::size_t>(slot - first_slot)]; }
  int& usage_at(std::int64_t slot) { return usage[static_cast<std::size_t>(slot - first_slot)]; }
  int usage_at(std::int64_t slot) const { return usage[static_cast<std::size_t>(slot - first_slot)]; }
};

struct Candidate {
  std::size_t region = 0;
  std::int64_t start = 0;
  double carbon = 0.0;
};

inline std::int64_t earliest_slot(const Job& j) { return static_cast<std::int64_t>(std::ceil(j.arrival_h)); }
inline std::int64_t latest_slot(const Job& j) {
  return static_cast<std::int64_t>(std::floor(j.arrival_h + j.slack_h));
}

/// Energy drawn in the k-th occupied slot of a job.
inline double slot_energy(const Job& job, const HardwarePlatform& platform, double pue, std::int64_t k,
                          std::int64_t slots) {
  const double rate = static_cast<double>(job.nodes) * platform.device_power_kw * pue;
  if (k + 1 < slots) return rate;
  const double tail = job.runtime_h() - static_cast<double>(slots - 1);
  return rate * std::clamp(tail, 0.0, 1.0);
}

inline ScheduleReport place_jobs(std::span<const Job> jobs, std::span<const RegionModel> regions,
                                 const Policy& policy, double pue) {
  if (regions.empty()) throw Error("simulate: no regions");
  if (!is_finite(pue) || pue < 1.0) throw Error("simulate: pue must be >= 1.0");
  for (const auto& r : regions) {
    if (r.capacity < 1) throw Error("region '" + r.name + "': capacity must be >= 1");
    ensure_valid(r.platform);
    ensure_valid(r.intensity);
  }
  for (const auto& j : jobs) validate_job(j);

  ScheduleReport report;
  report.policy = to_string(policy);
  for (const auto& r : regions) report.regions.push_back(r.name);
  report.peak_nodes_by_region.assign(regions.size(), 0);
  if (jobs.empty()) return report;

  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& j : jobs) {
    lo = std::min(lo, earliest_slot(j));
    hi = std::max(hi, latest_slot(j) + occupied_slots(j));
  }
  if (hi <= lo) hi = lo + 1;

  std::vector<RegionGrid> grids;
  for (const auto& r : regions) {
    RegionGrid g{lo, {}, std::vector<int>(static_cast<std::size_t>(hi - lo), 0)};
    g.intensity.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t s = lo; s < hi; ++s) {
      g.intensity.push_back(mean_intensity(r.intensity, Window{static_cast<double>(s), static_cast<double>(s + 1)}));
    }
    grids.push_back(std::move(g));
  }

  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jobs[a].arrival_h < jobs[b].arrival_h; });

  report.placements.resize(jobs.size());
  for (auto idx : order) {
    const Job& job = jobs[idx];
    const auto slots = occupied_slots(job);
    const auto first = earliest_slot(job);
    const auto last = latest_slot(job);

    auto fits = [&](std::size_t r, std::int64_t start) {
      for (std::int64_t s = start; s < start + slots; ++s) {
        if (grids[r].usage_at(s) + job.nodes > regions[r].capacity) return false;
      }
      return true;
    };
    auto carbon = [&](std::size_t r, std::int64_t start) {
      double kg = 0.0;
      for (std::int64_t k = 0; k < slots; ++k) {
        kg += slot_energy(job, regions[r].platform, pue, k, slots) * grids[r].intensity_at(start + k) / 1000.0;
      }
      return kg;
    };

    std::optional<Candidate> chosen;
    std::optional<Candidate> fallback;  // ThresholdDelay: latest feasible start
    for (std::int64_t start = first; start <= last; ++start) {
      for (std::size_t r = 0; r < regions.size(); ++r) {
        if (!fits(r, start)) continue;
        switch (policy.kind) {
          case PolicyKind::Immediate:
            if (!chosen) chosen = Candidate{r, start, 0.0};
            break;
          case PolicyKind::ThresholdDelay:
            if (!chosen && grids[r].intensity_at(start) <= policy.threshold_g_per_kwh) chosen = Candidate{r, start, 0.0};
            if (!fallback || fallback->start < start) fallback = Candidate{r, start, 0.0};
            break;
          case PolicyKind::LowestWindow: {
            const double kg = carbon(r, start);
            if (!chosen || kg < chosen->carbon) chosen = Candidate{r, start, kg};
            break;
          }
        }
      }
      if (chosen && policy.kind != PolicyKind::LowestWindow) break;
    }
    if (!chosen) chosen = fallback;
    if (!chosen) throw Error("job '" + job.id + "' cannot be placed within its slack window");

    const auto r = chosen->region;
    Placement p;
    p.job_id = job.id;
    p.region = r;
    p.start_h = chosen->start;
    p.end_h = chosen->start + slots;
    p.nodes = job.nodes;
    for (std::int64_t k = 0; k < slots; ++k) {
      p.energy_kwh += slot_energy(job, regions[r].platform, pue, k, slots);
      grids[r].usage_at(chosen->start + k) += job.nodes;
    }
    p.operational_kgco2e = carbon(r, chosen->start);
    p.delay_h = static_cast<double>(chosen->start) - job.arrival_h;
    report.placements[idx] = p;
  }

  ExactSum energy;
  ExactSum operational;
  ExactSum delay;
  for (const auto& p : report.placements) {
    energy.add(p.energy_kwh);
    operational.add(p.operational_kgco2e);
    delay.add(p.delay_h);
    report.max_delay_h = std::max(report.max_delay_h, p.delay_h);
    report.makespan_end_h = std::max(report.makespan_end_h, p.end_h);
  }
  report.energy_kwh = energy.value();
  report.operational_kgco2e = operational.value();
  report.mean_delay_h = delay.value() / static_cast<double>(jobs.size());

  for (std::size_t r = 0; r < regions.size(); ++r) {
    report.peak_nodes_by_region[r] = *std::max_element(grids[r].usage.begin(), grids[r].usage.end());
  }
  for (std::int64_t s = lo; s < hi; ++s) {
    int total = 0;
    for (const auto& g : grids) total += g.usage_at(s);
    report.peak_nodes = std::max(report.peak_nodes, total);
  }
  std::int64_t start = report.placements.front().start_h;
  for (const auto& p : report.placements) start = std::min(start, p.start_h);
  report.horizon_h = static_cast<double>(report.makespan_end_h - std::min(start, lo));
  return report;
}

}  // namespace detail

/// Extra embodied carbon for holding peak capacity above the reference peaks,
/// amortized over `horizon_h`.
inline double overprovision_embodied(std::span<const RegionModel> regions, std::span<const int> peaks,
                                     std::span<const int> reference_peaks, double horizon_h) {
  double kg = 0.0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const int extra = std::max(0, peaks[r] - reference_peaks[r]);
    const auto& p = regions[r].platform;
    kg += static_cast<double>(extra) * p.embodied_kgco2e * (horizon_h / p.lifetime_h);
  }
  return kg;
}

/// Places every job under `policy` and accounts operational carbon plus the
/// over-provisioning embodied cost relative to Immediate placement.
inline ScheduleReport simulate(std::span<const Job> jobs, std::span<const RegionModel> regions,
                               const Policy& policy, const SimulationOptions& options = {}) {
  auto report = detail::place_jobs(jobs, regions, policy, options.pue);
  if (policy.kind == PolicyKind::Immediate) {
    report.reference_peak_by_region = report.peak_nodes_by_region;
  } else {
    report.reference_peak_by_region =
        detail::place_jobs(jobs, regions, Policy::immediate(), options.pue).peak_nodes_by_region;
  }
  if (options.horizon_h) {
    if (!is_finite(*options.horizon_h) || *options.horizon_h < 0.0) throw Error("simulate: horizon must be >= 0");
    report.horizon_h = *options.horizon_h;
  }
  report.overprovision_embodied_kgco2e = overprovision_embodied(
      regions, report.peak_nodes_by_region, report.reference_peak_by_region, report.horizon_h);
  return report;
}

struct PolicyTradeoff {
  double operational_savings_kgco2e = 0.0;
  double embodied_overhead_kgco2e = 0.0;
  double net_kgco2e = 0.0;  ///< positive when the policy lowers total carbon
};

inline PolicyTradeoff policy_tradeoff(const ScheduleReport& baseline, const ScheduleReport& candidate) {
  auto ids = [](const ScheduleReport& r) {
    std::vector<std::string> out;
    for (const auto& p : r.placements) out.push_back(p.job_id);
    std::sort(out.begin(), out.end());
    return out;
  };
  if (ids(baseline) != ids(candidate)) throw Error("policy_tradeoff: reports cover different job sets");
  PolicyTradeoff t;
  t.operational_savings_kgco2e = baseline.operational_kgco2e - candidate.operational_kgco2e;
  t.embodied_overhead_kgco2e = candidate.overprovision_embodied_kgco2e - baseline.overprovision_embodied_kgco2e;
  t.net_kgco2e = t.operational_savings_kgco2e - t.embodied_overhead_kgco2e;
  return t;
}

}  // namespace aicarbon
