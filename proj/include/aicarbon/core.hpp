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

// Shared domain types for lifecycle carbon accounting.
//
// Units are fixed across the library:
//   power      kW
//   time       hours
//   energy     kWh
//   intensity  gCO2e per kWh
//   emissions  kgCO2e

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aicarbon {

inline constexpr std::string_view kVersion = "0.3.0";

inline constexpr double kDefaultPue = 1.1;
inline constexpr double kAcceleratedEmbodiedKg = 2000.0;
inline constexpr double kCpuOnlyEmbodiedKg = 1000.0;
inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kDefaultLifetimeHours = 4.0 * kHoursPerYear;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string field;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

inline std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.rule;
  }
  return out;
}

/// Thrown when a computation is handed inputs that fail validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error("invalid input: " + describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

inline bool is_finite(double x) noexcept { return std::isfinite(x); }

// ---------------------------------------------------------------------------

struct HardwarePlatform {
  std::string name;
  double device_power_kw = 0.0;  ///< average draw per node
  double embodied_kgco2e = 0.0;  ///< manufacturing footprint per node
  double lifetime_h = kDefaultLifetimeHours;
  bool accelerated = false;

  /// Platform with the default embodied footprint for its class.
  static HardwarePlatform with_defaults(std::string name, double device_power_kw, bool accelerated,
                                        double lifetime_h = kDefaultLifetimeHours) {
    return HardwarePlatform{std::move(name), device_power_kw,
                            accelerated ? kAcceleratedEmbodiedKg : kCpuOnlyEmbodiedKg, lifetime_h,
                            accelerated};
  }

  bool operator==(const HardwarePlatform&) const = default;
};

enum class PhaseKind { DataStorageIngestion, Experimentation, OfflineTraining, OnlineTraining, Inference };

inline constexpr std::array<PhaseKind, 5> kAllPhaseKinds = {
    PhaseKind::DataStorageIngestion, PhaseKind::Experimentation, PhaseKind::OfflineTraining,
    PhaseKind::OnlineTraining, PhaseKind::Inference};

/// Recurring phases are measured over the offline-training period.
constexpr bool is_recurring(PhaseKind kind) noexcept {
  return kind == PhaseKind::OnlineTraining || kind == PhaseKind::Inference;
}

/// Phases that count toward "training" when contrasting training with inference.
constexpr bool is_training(PhaseKind kind) noexcept {
  return kind == PhaseKind::Experimentation || kind == PhaseKind::OfflineTraining ||
         kind == PhaseKind::OnlineTraining;
}

constexpr std::string_view to_string(PhaseKind kind) noexcept {
  switch (kind) {
    case PhaseKind::DataStorageIngestion: return "data_storage_ingestion";
    case PhaseKind::Experimentation: return "experimentation";
    case PhaseKind::OfflineTraining: return "offline_training";
    case PhaseKind::OnlineTraining: return "online_training";
    case PhaseKind::Inference: return "inference";
  }
  return "unknown";
}

inline std::optional<PhaseKind> parse_phase_kind(std::string_view text) noexcept {
  for (auto kind : kAllPhaseKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

struct PhaseProfile {
  PhaseKind kind = PhaseKind::OfflineTraining;
  HardwarePlatform platform;
  int node_count = 1;
  double duration_h = 0.0;   ///< wall-clock reservation
  double utilization = 1.0;  ///< useful-work share of reserved node-hours, in (0, 1]

  double node_hours() const noexcept { return static_cast<double>(node_count) * duration_h; }

  bool operator==(const PhaseProfile&) const = default;
};

enum class AccountingMode { LocationBased, MarketBased };

constexpr std::string_view to_string(AccountingMode mode) noexcept {
  return mode == AccountingMode::LocationBased ? "location_based" : "market_based";
}

inline std::optional<AccountingMode> parse_accounting_mode(std::string_view text) noexcept {
  if (text == "location_based") return AccountingMode::LocationBased;
  if (text == "market_based") return AccountingMode::MarketBased;
  return std::nullopt;
}

struct IntensitySample {
  double timestamp_h = 0.0;
  double g_per_kwh = 0.0;

  bool operator==(const IntensitySample&) const = default;
};

/// Grid carbon intensity as a right-continuous step function.
///
/// Sample i holds on [t_i, t_{i+1}); the last sample holds indefinitely.
/// Nothing is defined before the first timestamp.
struct CarbonIntensitySeries {
  std::vector<IntensitySample> samples;
  AccountingMode mode = AccountingMode::LocationBased;

  static CarbonIntensitySeries constant(double g_per_kwh,
                                        AccountingMode mode = AccountingMode::LocationBased) {
    return CarbonIntensitySeries{{IntensitySample{0.0, g_per_kwh}}, mode};
  }

  bool is_constant() const noexcept { return samples.size() == 1; }
  double start_h() const { return samples.front().timestamp_h; }

  bool operator==(const CarbonIntensitySeries&) const = default;
};

struct MLTask {
  std::string name;
  std::vector<PhaseProfile> phases;
  double pue = kDefaultPue;
  CarbonIntensitySeries intensity = CarbonIntensitySeries::constant(0.0);
  double renewable_matching = 0.0;  ///< share of consumed energy matched by purchased renewables

  bool operator==(const MLTask&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(std::vector<Violation>& out, bool ok, std::string field, std::string rule) {
  if (!ok) out.push_back({std::move(field), std::move(rule)});
}

}  // namespace detail

inline void validate_into(const HardwarePlatform& p, const std::string& prefix,
                          std::vector<Violation>& out) {
  using detail::require;
  require(out, is_finite(p.device_power_kw) && p.device_power_kw > 0.0, prefix + "device_power_kw",
          "must be > 0");
  require(out, is_finite(p.embodied_kgco2e) && p.embodied_kgco2e >= 0.0,
          prefix + "embodied_kgco2e", "must be >= 0");
  require(out, is_finite(p.lifetime_h) && p.lifetime_h > 0.0, prefix + "lifetime_h", "must be > 0");
}

inline void validate_into(const PhaseProfile& phase, const std::string& prefix,
                          std::vector<Violation>& out) {
  using detail::require;
  validate_into(phase.platform, prefix + "platform.", out);
  require(out, phase.node_count >= 1, prefix + "node_count", "must be >= 1");
  require(out, is_finite(phase.duration_h) && phase.duration_h >= 0.0, prefix + "duration_h",
          "must be >= 0");
  require(out, is_finite(phase.utilization) && phase.utilization > 0.0 && phase.utilization <= 1.0,
          prefix + "utilization", "must be in (0, 1]");
}

inline void validate_into(const CarbonIntensitySeries& series, const std::string& prefix,
                          std::vector<Violation>& out) {
  using detail::require;
  require(out, !series.samples.empty(), prefix + "samples", "must contain at least one sample");
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    const auto at = prefix + "samples[" + std::to_string(i) + "]";
    require(out, is_finite(s.timestamp_h), at + ".timestamp_h", "must be finite");
    require(out, is_finite(s.g_per_kwh) && s.g_per_kwh >= 0.0, at + ".g_per_kwh", "must be >= 0");
    if (i > 0) {
      require(out, s.timestamp_h > series.samples[i - 1].timestamp_h, at + ".timestamp_h",
              "timestamps must be strictly increasing");
    }
  }
}

inline std::vector<Violation> validate(const HardwarePlatform& platform) {
  std::vector<Violation> out;
  validate_into(platform, "", out);
  return out;
}

inline std::vector<Violation> validate(const PhaseProfile& phase) {
  std::vector<Violation> out;
  validate_into(phase, "", out);
  return out;
}

inline std::vector<Violation> validate(const CarbonIntensitySeries& series) {
  std::vector<Violation> out;
  validate_into(series, "", out);
  return out;
}

/// Every broken invariant of the task, each naming its field. Empty iff valid.
inline std::vector<Violation> validate(const MLTask& task) {
  using detail::require;
  std::vector<Violation> out;
  require(out, is_finite(task.pue) && task.pue >= 1.0, "pue", "must be >= 1.0");
  require(out,
          is_finite(task.renewable_matching) && task.renewable_matching >= 0.0 &&
              task.renewable_matching <= 1.0,
          "renewable_matching", "must be in [0, 1]");
  validate_into(task.intensity, "intensity.", out);
  for (std::size_t i = 0; i < task.phases.size(); ++i) {
    validate_into(task.phases[i], "phases[" + std::to_string(i) + "].", out);
  }
  // Platforms are referenced by name in configs, so one name must mean one platform.
  for (std::size_t i = 0; i < task.phases.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto& a = task.phases[i].platform;
      const auto& b = task.phases[j].platform;
      if (a.name == b.name && a != b) {
        out.push_back({"phases[" + std::to_string(i) + "].platform.name",
                       "conflicts with another platform named '" + a.name + "'"});
        break;
      }
    }
  }
  return out;
}

template <typename T>
void ensure_valid(const T& value) {
  if (auto violations = validate(value); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

// ---------------------------------------------------------------------------
// Results

/// Operational emissions before and after renewable matching.
struct EmissionFigure {
  double gross_kgco2e = 0.0;
  double renewable_offset_kgco2e = 0.0;
  double net_kgco2e = 0.0;

  bool operator==(const EmissionFigure&) const = default;
};

struct PhaseCarbon {
  PhaseKind kind = PhaseKind::OfflineTraining;
  double operational_energy_kwh = 0.0;
  EmissionFigure operational;
  double embodied_kgco2e = 0.0;
  bool embodied_capped = false;

  double total_kgco2e() const noexcept { return operational.net_kgco2e + embodied_kgco2e; }

  bool operator==(const PhaseCarbon&) const = default;
};

enum class Column { Energy, Operational, Embodied, Total };

/// Per-phase results. Totals are always derived from the phase records.
struct CarbonBreakdown {
  std::vector<PhaseCarbon> phases;

  double value(const PhaseCarbon& p, Column column) const noexcept {
    switch (column) {
      case Column::Energy: return p.operational_energy_kwh;
      case Column::Operational: return p.operational.net_kgco2e;
      case Column::Embodied: return p.embodied_kgco2e;
      case Column::Total: return p.total_kgco2e();
    }
    return 0.0;
  }

  double total(Column column) const noexcept {
    double sum = 0.0;
    for (const auto& p : phases) sum += value(p, column);
    return sum;
  }

  double energy_kwh() const noexcept { return total(Column::Energy); }
  double operational_kgco2e() const noexcept { return total(Column::Operational); }
  double embodied_kgco2e() const noexcept { return total(Column::Embodied); }
  double total_kgco2e() const noexcept { return total(Column::Total); }

  double operational_gross_kgco2e() const noexcept {
    double sum = 0.0;
    for (const auto& p : phases) sum += p.operational.gross_kgco2e;
    return sum;
  }

  double renewable_offset_kgco2e() const noexcept {
    double sum = 0.0;
    for (const auto& p : phases) sum += p.operational.renewable_offset_kgco2e;
    return sum;
  }

  bool any_capped() const noexcept {
    for (const auto& p : phases) {
      if (p.embodied_capped) return true;
    }
    return false;
  }

  bool operator==(const CarbonBreakdown&) const = default;
};

}  // namespace aicarbon
