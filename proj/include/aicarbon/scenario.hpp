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

// What-if analyses over a computed baseline.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "aicarbon/core.hpp"

namespace aicarbon {

struct SweepRow {
  double axis = 0.0;
  double operational_kgco2e = 0.0;
  double embodied_kgco2e = 0.0;
  double total_kgco2e = 0.0;
  double ratio = 1.0;  ///< total relative to the baseline point

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::string axis_name;
  double baseline_axis = 0.0;
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

/// Fixed-work utilization sweep: reserved node-hours scale by u0/u, so operational
/// and embodied totals both scale by u0/u.
inline SweepResult utilization_sweep(const CarbonBreakdown& baseline, double u0,
                                     std::span<const double> targets) {
  if (!is_finite(u0) || u0 <= 0.0 || u0 > 1.0) throw Error("baseline utilization must be in (0, 1]");
  SweepResult out{"utilization", u0, {}};
  out.rows.reserve(targets.size());
  const double op = baseline.operational_kgco2e();
  const double emb = baseline.embodied_kgco2e();
  for (double u : targets) {
    if (!is_finite(u) || u <= 0.0 || u > 1.0) {
      throw Error("utilization target " + std::to_string(u) + " must be in (0, 1]");
    }
    const double scale = u0 / u;
    out.rows.push_back({u, op * scale, emb * scale, op * scale + emb * scale, scale});
  }
  return out;
}

/// Market-based renewable matching sweep. Fraction r removes r of the gross
/// operational emissions; embodied carbon is untouched. Ratios are relative to r = 0.
inline SweepResult renewable_sweep(const CarbonBreakdown& baseline, std::span<const double> fractions) {
  SweepResult out{"renewable_fraction", 0.0, {}};
  out.rows.reserve(fractions.size());
  const double gross = baseline.operational_gross_kgco2e();
  const double emb = baseline.embodied_kgco2e();
  const double base_total = gross + emb;
  if (!(base_total > 0.0)) throw Error("empty breakdown");
  for (double r : fractions) {
    if (!is_finite(r) || r < 0.0 || r > 1.0) {
      throw Error("renewable fraction " + std::to_string(r) + " must be in [0, 1]");
    }
    const double op = gross * (1.0 - r);
    out.rows.push_back({r, op, emb, op + emb, (op + emb) / base_total});
  }
  return out;
}

/// Matching fraction at which the renewable sweep reaches `target_ratio`.
inline double renewable_fraction_for_ratio(const CarbonBreakdown& baseline, double target_ratio) {
  const double gross = baseline.operational_gross_kgco2e();
  const double total = gross + baseline.embodied_kgco2e();
  if (!(gross > 0.0)) throw Error("baseline has no operational emissions");
  const double op_share = gross / total;
  const double r = (1.0 - target_ratio) / op_share;
  if (!(r >= 0.0 && r <= 1.0)) throw Error("target ratio not reachable by renewable matching");
  return r;
}

// ---------------------------------------------------------------------------
// Data/model scaling

struct ScalingPoint {
  double data_scale = 1.0;
  double model_scale = 1.0;
  double energy_per_step = 0.0;  ///< kWh per step
  double quality_error = 0.0;    ///< normalized entropy, lower is better

  bool operator==(const ScalingPoint&) const = default;
};

inline void validate_point(const ScalingPoint& p) {
  auto positive = [](double x) { return is_finite(x) && x > 0.0; };
  if (!positive(p.data_scale) || !positive(p.model_scale) || !positive(p.energy_per_step) ||
      !positive(p.quality_error)) {
    throw Error("scaling point values must be positive");
  }
}

inline bool dominates(const ScalingPoint& a, const ScalingPoint& b) noexcept {
  return a.energy_per_step <= b.energy_per_step && a.quality_error <= b.quality_error &&
         (a.energy_per_step < b.energy_per_step || a.quality_error < b.quality_error);
}

/// Input indices of the non-dominated points (minimize energy and error), ascending.
/// Exact duplicates keep only their first occurrence.
inline std::vector<std::size_t> pareto_indices(std::span<const ScalingPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = points[a];
    const auto& pb = points[b];
    if (pa.energy_per_step != pb.energy_per_step) return pa.energy_per_step < pb.energy_per_step;
    if (pa.quality_error != pb.quality_error) return pa.quality_error < pb.quality_error;
    return a < b;
  });
  std::vector<std::size_t> keep;
  double best_error = std::numeric_limits<double>::infinity();
  for (auto i : order) {
    if (points[i].quality_error < best_error) {
      keep.push_back(i);
      best_error = points[i].quality_error;
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

inline std::vector<ScalingPoint> pareto_frontier(std::span<const ScalingPoint> points) {
  std::vector<ScalingPoint> out;
  for (auto i : pareto_indices(points)) out.push_back(points[i]);
  return out;
}

struct PowerLawFit {
  double coefficient = 0.0;  ///< a in error = a * energy^(-p)
  double exponent = 0.0;     ///< p
  double residual = 0.0;     ///< sum of squared residuals in log-log space
};

/// Least-squares fit of ln(error) = ln(a) - p ln(energy).
inline PowerLawFit powerlaw_fit(std::span<const ScalingPoint> points) {
  if (points.size() < 2) throw Error("powerlaw_fit: need at least two points");
  for (const auto& p : points) validate_point(p);

  const double n = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    mean_x += std::log(p.energy_per_step);
    mean_y += std::log(p.quality_error);
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.energy_per_step) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(p.quality_error) - mean_y);
  }
  if (!(sxx > 0.0)) throw Error("powerlaw_fit: energies must not all be equal");

  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double residual = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.quality_error) - (intercept + slope * std::log(p.energy_per_step));
    residual += r * r;
  }
  return {std::exp(intercept), slope == 0.0 ? 0.0 : -slope, residual};
}

struct ScalingComparison {
  double energy_ratio = 1.0;  ///< b.energy / a.energy
  double error_delta = 0.0;   ///< a.error - b.error
};

inline ScalingComparison compare_scaling(const ScalingPoint& a, const ScalingPoint& b) {
  validate_point(a);
  validate_point(b);
  return {b.energy_per_step / a.energy_per_step, a.quality_error - b.quality_error};
}

/// First point at the given data and model scale.
inline const ScalingPoint& find_point(std::span<const ScalingPoint> points, double data_scale,
                                      double model_scale) {
  for (const auto& p : points) {
    if (p.data_scale == data_scale && p.model_scale == model_scale) return p;
  }
  throw Error("no scaling point at data " + std::to_string(data_scale) + ", model " +
              std::to_string(model_scale));
}

}  // namespace aicarbon
