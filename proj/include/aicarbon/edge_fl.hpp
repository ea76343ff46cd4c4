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

// Operational carbon of federated-learning campaigns at the edge.
//
// Compute time is charged at the device power and upload/download time at the
// router power. Nothing else is counted and no PUE applies.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "aicarbon/accounting.hpp"
#include "aicarbon/core.hpp"

namespace aicarbon {

inline constexpr double kDefaultDevicePowerKw = 0.003;
inline constexpr double kDefaultRouterPowerKw = 0.0075;

/// Correctly rounded floating-point sum (Shewchuk partials), so the result does not
/// depend on summation order or partitioning.
class ExactSum {
 public:
  void add(double x) {
    std::size_t used = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[used++] = lo;
      x = hi;
    }
    partials_.resize(used);
    partials_.push_back(x);
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    auto n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round-half-even correction across the remaining partials.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

struct FLClientLog {
  double compute_h = 0.0;
  double download_h = 0.0;
  double upload_h = 0.0;

  bool operator==(const FLClientLog&) const = default;
};

struct FLCampaign {
  std::vector<FLClientLog> logs;  ///< per-client rows, or a single pre-aggregated row
  double device_power_kw = kDefaultDevicePowerKw;
  double router_power_kw = kDefaultRouterPowerKw;
  CarbonIntensitySeries edge_intensity = CarbonIntensitySeries::constant(0.0);
  std::optional<Window> intensity_window;  ///< defaults to the span of the samples

  bool operator==(const FLCampaign&) const = default;
};

inline std::vector<Violation> validate(const FLCampaign& c) {
  std::vector<Violation> out;
  detail::require(out, is_finite(c.device_power_kw) && c.device_power_kw > 0.0, "device_power_kw",
                  "must be > 0");
  detail::require(out, is_finite(c.router_power_kw) && c.router_power_kw > 0.0, "router_power_kw",
                  "must be > 0");
  for (std::size_t i = 0; i < c.logs.size(); ++i) {
    const auto& l = c.logs[i];
    const auto at = "logs[" + std::to_string(i) + "]";
    auto ok = [](double x) { return is_finite(x) && x >= 0.0; };
    detail::require(out, ok(l.compute_h), at + ".compute_h", "must be >= 0");
    detail::require(out, ok(l.download_h), at + ".download_h", "must be >= 0");
    detail::require(out, ok(l.upload_h), at + ".upload_h", "must be >= 0");
  }
  validate_into(c.edge_intensity, "edge_intensity.", out);
  return out;
}

/// Column totals of the logs; feeding this single row back in gives identical results.
inline FLClientLog aggregate(std::span<const FLClientLog> logs) {
  ExactSum compute;
  ExactSum download;
  ExactSum upload;
  for (const auto& l : logs) {
    compute.add(l.compute_h);
    download.add(l.download_h);
    upload.add(l.upload_h);
  }
  return {compute.value(), download.value(), upload.value()};
}

struct FLEnergy {
  double compute_kwh = 0.0;
  double comm_kwh = 0.0;

  double total_kwh() const noexcept { return compute_kwh + comm_kwh; }
  /// Communication share of the campaign energy; 0 for an empty campaign.
  double comm_share() const noexcept { return total_kwh() > 0.0 ? comm_kwh / total_kwh() : 0.0; }
};

inline FLEnergy fl_energy(const FLCampaign& campaign) {
  for (const auto& l : campaign.logs) {
    if (l.compute_h < 0.0 || l.download_h < 0.0 || l.upload_h < 0.0) {
      throw Error("fl_energy: negative time in client log");
    }
  }
  ensure_valid(campaign);
  const auto totals = aggregate(campaign.logs);
  ExactSum comm_h;
  comm_h.add(totals.download_h);
  comm_h.add(totals.upload_h);
  return {totals.compute_h * campaign.device_power_kw, comm_h.value() * campaign.router_power_kw};
}

/// Mean edge intensity: the constant for one sample, else the explicit window or the
/// span between first and last sample.
inline double edge_mean_intensity(const FLCampaign& campaign) {
  const auto& series = campaign.edge_intensity;
  if (campaign.intensity_window) return mean_intensity(series, *campaign.intensity_window);
  if (series.is_constant()) {
    ensure_valid(series);
    return series.samples.front().g_per_kwh;
  }
  return mean_intensity(series, Window{series.start_h(), series.samples.back().timestamp_h});
}

inline double fl_carbon(const FLCampaign& campaign) {
  const auto energy = fl_energy(campaign);
  return energy.total_kwh() * edge_mean_intensity(campaign) / 1000.0;
}

}  // namespace aicarbon
