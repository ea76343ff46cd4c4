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

#include <algorithm>
#include <limits>

#include "aicarbon/core.hpp"

namespace aicarbon {

/// Half-open time interval in hours.
struct Window {
  double start_h = 0.0;
  double end_h = 0.0;

  double length_h() const noexcept { return end_h - start_h; }
};

/// Facility energy of one phase: per-node draw x nodes x hours x PUE.
inline double operational_energy(const PhaseProfile& phase, double pue) {
  if (!is_finite(pue) || !is_finite(phase.duration_h) || !is_finite(phase.platform.device_power_kw)) {
    throw Error("operational_energy: non-finite input");
  }
  if (pue < 1.0) throw Error("operational_energy: pue must be >= 1.0");
  ensure_valid(phase);
  return phase.platform.device_power_kw * static_cast<double>(phase.node_count) * phase.duration_h * pue;
}

/// Time-weighted mean of the step function over the window.
///
/// The window start is clamped to the first sample; an empty remainder is an error.
inline double mean_intensity(const CarbonIntensitySeries& series, Window window) {
  ensure_valid(series);
  if (!is_finite(window.start_h) || !is_finite(window.end_h)) {
    throw Error("mean_intensity: non-finite window");
  }
  const double start = std::max(window.start_h, series.start_h());
  const double end = window.end_h;
  if (!(end > start)) throw Error("no intensity coverage");

  const auto& s = series.samples;
  // First step whose interval intersects [start, end).
  auto it = std::upper_bound(s.begin(), s.end(), start,
                             [](double t, const IntensitySample& x) { return t < x.timestamp_h; });
  std::size_t i = static_cast<std::size_t>(std::distance(s.begin(), it)) - 1;

  const double step_end = i + 1 < s.size() ? s[i + 1].timestamp_h : std::numeric_limits<double>::infinity();
  if (end <= step_end) return s[i].g_per_kwh;

  double weighted = 0.0;
  for (; i < s.size(); ++i) {
    const double lo = std::max(start, s[i].timestamp_h);
    const double hi = i + 1 < s.size() ? std::min(end, s[i + 1].timestamp_h) : end;
    if (hi <= lo) break;
    weighted += s[i].g_per_kwh * (hi - lo);
    if (hi >= end) break;
  }
  return weighted / (end - start);
}

/// Emissions of `energy_kwh` drawn uniformly over `window`.
///
/// Renewable matching offsets emissions only under market-based accounting.
inline EmissionFigure operational_carbon(double energy_kwh, const CarbonIntensitySeries& intensity,
                                         Window window, double renewable_matching) {
  if (!is_finite(energy_kwh) || energy_kwh < 0.0) {
    throw Error("operational_carbon: energy must be finite and >= 0");
  }
  if (!is_finite(renewable_matching) || renewable_matching < 0.0 || renewable_matching > 1.0) {
    throw Error("operational_carbon: renewable_matching must be in [0, 1]");
  }
  const double gross = energy_kwh * mean_intensity(intensity, window) / 1000.0;
  if (intensity.mode == AccountingMode::LocationBased) return {gross, 0.0, gross};
  if (renewable_matching == 1.0) return {gross, gross, 0.0};
  const double offset = gross * renewable_matching;
  return {gross, offset, gross * (1.0 - renewable_matching)};
}

struct EmbodiedAttribution {
  double kgco2e = 0.0;
  bool capped = false;  ///< reservation exceeded the nodes' remaining lifetime
};

/// Manufacturing footprint charged to a reservation, amortized linearly over the
/// platform lifetime by reserved node-hours.
///
/// `node_count` bounds the attribution: a reservation can never be charged more than
/// the embodied footprint of the nodes it holds. Exceeding that caps and flags.
inline EmbodiedAttribution embodied_attribution(const HardwarePlatform& platform, double node_hours,
                                                double exclusive_share, int node_count = 1) {
  ensure_valid(platform);
  if (!is_finite(node_hours) || node_hours < 0.0) {
    throw Error("embodied_attribution: node_hours must be finite and >= 0");
  }
  if (!is_finite(exclusive_share) || exclusive_share < 0.0 || exclusive_share > 1.0) {
    throw Error("embodied_attribution: exclusive_share must be in [0, 1]");
  }
  if (node_count < 1) throw Error("embodied_attribution: node_count must be >= 1");

  const double nodes = static_cast<double>(node_count);
  if (node_hours > platform.lifetime_h * nodes) {
    return {platform.embodied_kgco2e * nodes * exclusive_share, true};
  }
  return {platform.embodied_kgco2e * (node_hours / platform.lifetime_h) * exclusive_share, false};
}

}  // namespace aicarbon
