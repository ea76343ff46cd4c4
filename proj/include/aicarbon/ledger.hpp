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

// Cross-stack efficiency ledgers and fleet demand trends.
//
// A factor's multiplier is an energy-efficiency gain: 2.0 halves operational energy.
// Factors never touch embodied carbon.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aicarbon/core.hpp"

namespace aicarbon {

enum class FactorCategory { Model, Platform, Infrastructure, Hardware };

constexpr std::string_view to_string(FactorCategory c) noexcept {
  switch (c) {
    case FactorCategory::Model: return "model";
    case FactorCategory::Platform: return "platform";
    case FactorCategory::Infrastructure: return "infrastructure";
    case FactorCategory::Hardware: return "hardware";
  }
  return "unknown";
}

inline std::optional<FactorCategory> parse_factor_category(std::string_view text) noexcept {
  for (auto c : {FactorCategory::Model, FactorCategory::Platform, FactorCategory::Infrastructure,
                 FactorCategory::Hardware}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

struct EfficiencyFactor {
  std::string name;
  FactorCategory category = FactorCategory::Model;
  double multiplier = 1.0;

  /// "15% reduction" style input, normalized to a multiplier.
  static EfficiencyFactor from_reduction(std::string name, FactorCategory category, double reduction) {
    if (!is_finite(reduction) || reduction < 0.0 || reduction >= 1.0) {
      throw Error("reduction must be in [0, 1)");
    }
    return {std::move(name), category, 1.0 / (1.0 - reduction)};
  }

  bool operator==(const EfficiencyFactor&) const = default;
};

struct Ledger {
  std::string name;
  std::vector<EfficiencyFactor> factors;

  bool operator==(const Ledger&) const = default;
};

/// The serving-optimization chain for the cross-lingual language model.
inline Ledger lm_ledger() {
  return Ledger{"lm",
                {{"platform-level caching", FactorCategory::Platform, 6.7},
                 {"gpu acceleration", FactorCategory::Hardware, 10.1},
                 {"fp16 precision", FactorCategory::Model, 2.4},
                 {"custom encoder operators", FactorCategory::Model, 5.0}}};
}

inline std::optional<Ledger> ledger_preset(std::string_view name) {
  if (name == "lm") return lm_ledger();
  return std::nullopt;
}

inline void validate_factor(const EfficiencyFactor& f) {
  if (!is_finite(f.multiplier) || f.multiplier <= 0.0) {
    throw Error("factor '" + f.name + "': multiplier must be > 0");
  }
}

/// Aggregate multiplier of the chain (product of all factors).
inline double compose(std::span<const EfficiencyFactor> factors) {
  if (factors.empty()) throw Error("compose: empty factor list");
  double product = 1.0;
  for (const auto& f : factors) {
    validate_factor(f);
    product *= f.multiplier;
  }
  return product;
}

inline double compose(const Ledger& ledger) { return compose(std::span<const EfficiencyFactor>(ledger.factors)); }

/// Operational energy after applying each factor in turn.
inline double apply_sequentially(double energy_kwh, std::span<const EfficiencyFactor> factors) {
  for (const auto& f : factors) {
    validate_factor(f);
    energy_kwh /= f.multiplier;
  }
  return energy_kwh;
}

/// Breakdown with operational columns divided by the aggregate gain.
inline CarbonBreakdown apply_gain(const CarbonBreakdown& breakdown, double aggregate) {
  if (!is_finite(aggregate) || aggregate <= 0.0) throw Error("aggregate gain must be > 0");
  CarbonBreakdown out = breakdown;
  for (auto& p : out.phases) {
    p.operational_energy_kwh /= aggregate;
    p.operational.gross_kgco2e /= aggregate;
    p.operational.renewable_offset_kgco2e /= aggregate;
    p.operational.net_kgco2e /= aggregate;
  }
  return out;
}

struct TrendSpec {
  int periods = 0;                      ///< half-year steps
  double efficiency_per_period = 0.20;  ///< fractional energy reduction per step
  double growth_per_period = 1.0;       ///< demand multiplier per step

  bool operator==(const TrendSpec&) const = default;
};

inline std::vector<Violation> validate(const TrendSpec& spec) {
  std::vector<Violation> out;
  detail::require(out, spec.periods >= 0, "periods", "must be >= 0");
  detail::require(out,
                  is_finite(spec.efficiency_per_period) && spec.efficiency_per_period >= 0.0 &&
                      spec.efficiency_per_period < 1.0,
                  "efficiency_per_period", "must be in [0, 1)");
  detail::require(out, is_finite(spec.growth_per_period) && spec.growth_per_period >= 0.0,
                  "growth_per_period", "must be >= 0");
  return out;
}

/// Net demand multiplier after each period, index 0 being the starting point.
inline std::vector<double> net_trend(const TrendSpec& spec) {
  ensure_valid(spec);
  const double step = spec.growth_per_period * (1.0 - spec.efficiency_per_period);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.periods) + 1);
  for (int k = 0; k <= spec.periods; ++k) out.push_back(std::pow(step, k));
  return out;
}

struct QuantizationDelta {
  std::string model;
  int bits_from = 32;
  int bits_to = 32;
  // Unreported effects stay empty rather than defaulting to a guess.
  std::optional<double> size_reduction;
  std::optional<double> bandwidth_reduction;
  std::optional<double> latency_speedup;

  bool operator==(const QuantizationDelta&) const = default;
};

/// Measured fp32 to fp16 effects on the production recommendation models.
inline std::vector<QuantizationDelta> default_quantization_table() {
  return {
      {"rm1", 32, 16, std::nullopt, std::nullopt, 2.5},
      {"rm2", 32, 16, 0.15, 0.207, std::nullopt},
  };
}

inline QuantizationDelta quantization_delta(std::string_view model, int bits_from, int bits_to,
                                            std::span<const QuantizationDelta> table) {
  if (bits_from == bits_to) return {std::string(model), bits_from, bits_to, 0.0, 0.0, 1.0};
  for (const auto& row : table) {
    if (row.model == model && row.bits_from == bits_from && row.bits_to == bits_to) return row;
  }
  throw Error("no calibration for " + std::string(model) + " " + std::to_string(bits_from) + "->" +
              std::to_string(bits_to));
}

inline QuantizationDelta quantization_delta(std::string_view model, int bits_from, int bits_to) {
  const auto table = default_quantization_table();
  return quantization_delta(model, bits_from, bits_to, table);
}

}  // namespace aicarbon
