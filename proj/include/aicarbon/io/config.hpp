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

// Task configuration files.
//
// A config is a JSON document with units spelled out in every key name. Unknown
// keys are rejected so that a typo can never silently fall back to a default.
// emit_config() writes the canonical form: fixed key order, two-space indent,
// trailing newline. Parsing a canonical file and emitting it again reproduces it
// byte for byte.
//
//   {
//     "name": "lm",
//     "pue": 1.1,
//     "renewable_matching": 0.0,
//     "intensity": {"mode": "location_based", "constant_g_per_kwh": 120.0},
//     "platforms": [{"name": "gpu-node", "device_power_kw": 1.0, ...}],
//     "phases": [{"kind": "inference", "platform": "gpu-node", ...}],
//     "ledgers": [...], "trend": {...}, "sweep": {...}, "scaling": {...},
//     "fl": {...}, "schedule": {...}
//   }

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "aicarbon/core.hpp"
#include "aicarbon/edge_fl.hpp"
#include "aicarbon/io/csv.hpp"
#include "aicarbon/ledger.hpp"
#include "aicarbon/scenario.hpp"
#include "aicarbon/sched_sim.hpp"

namespace aicarbon::io {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  using Error::Error;
};

struct IntensitySpec {
  AccountingMode mode = AccountingMode::LocationBased;
  std::optional<double> constant_g_per_kwh;
  std::vector<IntensitySample> samples;
  std::optional<std::string> csv;  ///< relative to the config file

  bool operator==(const IntensitySpec&) const = default;
};

struct LedgerSpec {
  std::optional<std::string> preset;
  Ledger ledger;

  bool operator==(const LedgerSpec&) const = default;
};

struct QuantizationQuery {
  std::string model;
  int bits_from = 32;
  int bits_to = 16;

  bool operator==(const QuantizationQuery&) const = default;
};

enum class SweepKind { Utilization, Renewable };

struct SweepSpec {
  SweepKind kind = SweepKind::Utilization;
  double baseline_utilization = 1.0;  ///< utilization sweeps only
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct ScaleKey {
  double data_scale = 1.0;
  double model_scale = 1.0;

  bool operator==(const ScaleKey&) const = default;
};

struct ScalingSpec {
  std::optional<std::string> csv;
  std::vector<ScalingPoint> points;
  std::optional<std::pair<ScaleKey, ScaleKey>> compare;

  bool operator==(const ScalingSpec&) const = default;
};

struct FLSpec {
  double device_power_kw = kDefaultDevicePowerKw;
  double router_power_kw = kDefaultRouterPowerKw;
  IntensitySpec edge_intensity;
  std::optional<std::string> logs_csv;
  std::optional<FLClientLog> totals;  ///< pre-aggregated hours

  bool operator==(const FLSpec&) const = default;
};

struct JobGeneration {
  double p50_gpu_days = 1.5;
  double p99_gpu_days = 24.0;
  std::uint64_t count = 0;
  int nodes = 1;
  double horizon_h = 168.0;
  double slack_h = 24.0;
  std::uint64_t seed = 0;

  bool operator==(const JobGeneration&) const = default;
};

struct RegionSpec {
  std::string name;
  int capacity_nodes = 1;
  std::string platform;
  IntensitySpec intensity;

  bool operator==(const RegionSpec&) const = default;
};

struct ScheduleSpec {
  Policy policy;
  double pue = kDefaultPue;
  std::optional<double> horizon_h;
  std::optional<std::string> jobs_csv;
  std::optional<JobGeneration> generate;
  std::vector<RegionSpec> regions;

  bool operator==(const ScheduleSpec&) const = default;
};

struct Config {
  MLTask task;  ///< resolved; phases hold copies of their platforms
  IntensitySpec intensity;
  std::vector<HardwarePlatform> platforms;
  std::optional<double> kg_per_mile;
  std::vector<LedgerSpec> ledgers;
  std::vector<QuantizationQuery> quantization;
  std::optional<TrendSpec> trend;
  std::optional<SweepSpec> sweep;
  std::optional<ScalingSpec> scaling;
  std::optional<FLSpec> fl;
  std::optional<ScheduleSpec> schedule;
  std::filesystem::path base_dir;  ///< not serialized
};

// ---------------------------------------------------------------------------
// Reading

namespace detail {

class Object {
 public:
  Object(const Json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(where() + "expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j_.items()) {
      if (!keys.count(item.key())) throw ParseError("unknown key '" + item.key() + "'" + in());
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& at(const char* key) const {
    if (!j_.contains(key)) throw ParseError("missing required key: " + child(key));
    return j_.at(key);
  }

  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ParseError(child(key) + ": expected a number");
    return v.get<double>();
  }
  std::optional<double> opt_number(const char* key) const {
    return has(key) ? std::optional<double>(number(key)) : std::nullopt;
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ParseError(child(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ParseError(child(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::optional<std::string> opt_string(const char* key) const {
    return has(key) ? std::optional<std::string>(string(key)) : std::nullopt;
  }

  bool boolean(const char* key) const {
    const auto& v = at(key);
    if (!v.is_boolean()) throw ParseError(child(key) + ": expected true or false");
    return v.get<bool>();
  }

  const Json& array(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array()) throw ParseError(child(key) + ": expected an array");
    return v;
  }

  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    const auto& a = array(key);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number()) throw ParseError(child(key) + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(a[i].get<double>());
    }
    return out;
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string child(const char* key, std::size_t i) const { return child(key) + "[" + std::to_string(i) + "]"; }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }
  std::string in() const { return path_.empty() ? "" : " in " + path_; }

  const Json& j_;
  std::string path_;
};

inline IntensitySpec read_intensity(const Json& j, const std::string& path) {
  Object o(j, path, {"mode", "constant_g_per_kwh", "samples", "csv"});
  IntensitySpec spec;
  const auto mode = o.string("mode");
  auto parsed = parse_accounting_mode(mode);
  if (!parsed) throw ParseError(o.child("mode") + ": expected location_based or market_based, got '" + mode + "'");
  spec.mode = *parsed;
  const int sources = int(o.has("constant_g_per_kwh")) + int(o.has("samples")) + int(o.has("csv"));
  if (sources != 1) throw ParseError(path + ": exactly one of constant_g_per_kwh, samples, csv is required");
  spec.constant_g_per_kwh = o.opt_number("constant_g_per_kwh");
  spec.csv = o.opt_string("csv");
  if (o.has("samples")) {
    const auto& a = o.array("samples");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& s = a[i];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        throw ParseError(o.child("samples", i) + ": expected [timestamp_h, g_per_kwh]");
      }
      spec.samples.push_back({s[0].get<double>(), s[1].get<double>()});
    }
  }
  return spec;
}

inline HardwarePlatform read_platform(const Json& j, const std::string& path) {
  Object o(j, path, {"name", "device_power_kw", "embodied_kgco2e", "lifetime_h", "accelerated"});
  HardwarePlatform p;
  p.name = o.string("name");
  p.accelerated = o.boolean("accelerated");
  p.device_power_kw = o.number("device_power_kw");
  p.embodied_kgco2e = o.number_or("embodied_kgco2e", p.accelerated ? kAcceleratedEmbodiedKg : kCpuOnlyEmbodiedKg);
  p.lifetime_h = o.number_or("lifetime_h", kDefaultLifetimeHours);
  return p;
}

inline const HardwarePlatform& find_platform(const std::vector<HardwarePlatform>& platforms, const std::string& name,
                                             const std::string& path) {
  for (const auto& p : platforms) {
    if (p.name == name) return p;
  }
  throw ParseError(path + ": unknown platform '" + name + "'");
}

inline Ledger read_ledger_factors(const Object& o, const std::string& name) {
  Ledger ledger{name, {}};
  const auto& factors = o.array("factors");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto path = o.child("factors", i);
    Object f(factors[i], path, {"name", "category", "multiplier", "reduction"});
    const auto cat_text = f.string("category");
    const auto cat = parse_factor_category(cat_text);
    if (!cat) throw ParseError(path + ".category: unknown category '" + cat_text + "'");
    if (f.has("multiplier") == f.has("reduction")) {
      throw ParseError(path + ": exactly one of multiplier, reduction is required");
    }
    EfficiencyFactor factor;
    try {
      factor = f.has("multiplier") ? EfficiencyFactor{f.string("name"), *cat, f.number("multiplier")}
                                   : EfficiencyFactor::from_reduction(f.string("name"), *cat, f.number("reduction"));
      validate_factor(factor);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(path + ": " + e.what());
    }
    ledger.factors.push_back(std::move(factor));
  }
  if (ledger.factors.empty()) throw ParseError(o.child("factors") + ": at least one factor is required");
  return ledger;
}

inline Policy read_policy(const Object& o) {
  const auto kind = o.string("policy");
  if (kind == "immediate") return Policy::immediate();
  if (kind == "lowest_window") return Policy::lowest_window();
  if (kind == "threshold_delay") return Policy::threshold_delay(o.number("threshold_g_per_kwh"));
  throw ParseError(o.child("policy") + ": expected immediate, threshold_delay or lowest_window, got '" + kind + "'");
}

inline void require_positive_int(std::int64_t v, const std::string& path) {
  if (v < 1 || v > std::numeric_limits<int>::max()) throw ParseError(path + ": must be a positive integer");
}

}  // namespace detail

inline CarbonIntensitySeries resolve_intensity(const IntensitySpec& spec, const std::filesystem::path& base_dir) {
  if (spec.csv) return ingest_intensity(base_dir / *spec.csv, spec.mode);
  if (spec.constant_g_per_kwh) return CarbonIntensitySeries::constant(*spec.constant_g_per_kwh, spec.mode);
  return CarbonIntensitySeries{spec.samples, spec.mode};
}

/// Builds and validates a config from JSON text. Relative file references resolve
/// against `base_dir`.
inline Config parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {}) {
  Json root;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    root = Json::object();
  } else {
    try {
      root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      // The message already carries "at line L, column C".
      std::string what = e.what();
      const auto pos = what.find("parse error");
      throw ParseError(pos == std::string::npos ? what : what.substr(pos));
    }
  }

  detail::Object o(root, "",
                   {"name", "pue", "renewable_matching", "intensity", "platforms", "phases", "kg_per_mile", "ledgers",
                    "quantization", "trend", "sweep", "scaling", "fl", "schedule"});
  Config cfg;
  cfg.base_dir = base_dir;
  cfg.task.name = o.string("name");
  cfg.task.pue = o.number_or("pue", kDefaultPue);
  cfg.task.renewable_matching = o.number_or("renewable_matching", 0.0);
  cfg.kg_per_mile = o.opt_number("kg_per_mile");
  if (cfg.kg_per_mile && !(*cfg.kg_per_mile > 0.0)) throw ParseError("kg_per_mile: must be > 0");

  if (o.has("intensity")) {
    cfg.intensity = detail::read_intensity(o.at("intensity"), "intensity");
  } else {
    cfg.intensity.constant_g_per_kwh = 0.0;
  }
  cfg.task.intensity = resolve_intensity(cfg.intensity, base_dir);

  if (o.has("platforms")) {
    const auto& a = o.array("platforms");
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto p = detail::read_platform(a[i], o.child("platforms", i));
      for (const auto& q : cfg.platforms) {
        if (q.name == p.name) throw ParseError(o.child("platforms", i) + ": duplicate platform '" + p.name + "'");
      }
      cfg.platforms.push_back(std::move(p));
    }
  }

  if (o.has("phases")) {
    const auto& a = o.array("phases");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto path = o.child("phases", i);
      detail::Object ph(a[i], path, {"kind", "platform", "node_count", "duration_h", "utilization"});
      PhaseProfile phase;
      const auto kind = ph.string("kind");
      const auto parsed = parse_phase_kind(kind);
      if (!parsed) throw ParseError(path + ".kind: unknown phase kind '" + kind + "'");
      phase.kind = *parsed;
      phase.platform = detail::find_platform(cfg.platforms, ph.string("platform"), path + ".platform");
      const auto nodes = ph.integer("node_count");
      if (nodes > std::numeric_limits<int>::max() || nodes < std::numeric_limits<int>::min()) {
        throw ParseError(path + ".node_count: out of range");
      }
      phase.node_count = static_cast<int>(nodes);
      phase.duration_h = ph.number("duration_h");
      phase.utilization = ph.number_or("utilization", 1.0);
      cfg.task.phases.push_back(std::move(phase));
    }
  }

  if (auto violations = validate(cfg.task); !violations.empty()) throw ValidationError(std::move(violations));

  if (o.has("ledgers")) {
    const auto& a = o.array("ledgers");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto path = o.child("ledgers", i);
      detail::Object l(a[i], path, {"name", "preset", "factors"});
      LedgerSpec spec;
      if (l.has("preset")) {
        if (l.has("factors") || l.has("name")) throw ParseError(path + ": a preset ledger takes no name or factors");
        spec.preset = l.string("preset");
        auto preset = ledger_preset(*spec.preset);
        if (!preset) throw ParseError(path + ".preset: unknown ledger preset '" + *spec.preset + "'");
        spec.ledger = *preset;
      } else {
        spec.ledger = detail::read_ledger_factors(l, l.string("name"));
      }
      cfg.ledgers.push_back(std::move(spec));
    }
  }

  if (o.has("quantization")) {
    const auto& a = o.array("quantization");
    for (std::size_t i = 0; i < a.size(); ++i) {
      detail::Object q(a[i], o.child("quantization", i), {"model", "bits_from", "bits_to"});
      cfg.quantization.push_back(
          {q.string("model"), static_cast<int>(q.integer("bits_from")), static_cast<int>(q.integer("bits_to"))});
    }
  }

  if (o.has("trend")) {
    detail::Object t(o.at("trend"), "trend", {"periods", "efficiency_per_period", "growth_per_period"});
    TrendSpec spec;
    spec.periods = static_cast<int>(t.integer("periods"));
    spec.efficiency_per_period = t.number_or("efficiency_per_period", 0.20);
    spec.growth_per_period = t.number_or("growth_per_period", 1.0);
    if (auto violations = validate(spec); !violations.empty()) {
      for (auto& v : violations) v.field = "trend." + v.field;
      throw ValidationError(std::move(violations));
    }
    cfg.trend = spec;
  }

  if (o.has("sweep")) {
    const auto& j = o.at("sweep");
    const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    SweepSpec spec;
    if (kind == "utilization") {
      detail::Object s(j, "sweep", {"kind", "baseline_utilization", "targets"});
      spec.kind = SweepKind::Utilization;
      spec.baseline_utilization = s.number("baseline_utilization");
      spec.values = s.numbers("targets");
      if (!(spec.baseline_utilization > 0.0 && spec.baseline_utilization <= 1.0)) {
        throw ParseError("sweep.baseline_utilization: must be in (0, 1]");
      }
      for (double u : spec.values) {
        if (!(u > 0.0 && u <= 1.0)) throw ParseError("sweep.targets: every target must be in (0, 1]");
      }
    } else if (kind == "renewable") {
      detail::Object s(j, "sweep", {"kind", "fractions"});
      spec.kind = SweepKind::Renewable;
      spec.values = s.numbers("fractions");
      for (double r : spec.values) {
        if (!(r >= 0.0 && r <= 1.0)) throw ParseError("sweep.fractions: every fraction must be in [0, 1]");
      }
    } else {
      detail::Object s(j, "sweep", {"kind", "baseline_utilization", "targets", "fractions"});
      throw ParseError("sweep.kind: expected utilization or renewable");
    }
    cfg.sweep = spec;
  }

  if (o.has("scaling")) {
    detail::Object s(o.at("scaling"), "scaling", {"csv", "points", "compare"});
    ScalingSpec spec;
    spec.csv = s.opt_string("csv");
    if (s.has("points")) {
      const auto& a = s.array("points");
      for (std::size_t i = 0; i < a.size(); ++i) {
        detail::Object p(a[i], s.child("points", i),
                         {"data_scale", "model_scale", "energy_per_step_kwh", "quality_error"});
        ScalingPoint pt{p.number("data_scale"), p.number("model_scale"), p.number("energy_per_step_kwh"),
                        p.number("quality_error")};
        try {
          validate_point(pt);
        } catch (const Error& e) {
          throw ParseError(s.child("points", i) + ": " + e.what());
        }
        spec.points.push_back(pt);
      }
    }
    if (spec.csv.has_value() == s.has("points")) throw ParseError("scaling: exactly one of csv, points is required");
    if (s.has("compare")) {
      detail::Object c(s.at("compare"), "scaling.compare", {"a", "b"});
      auto key = [](const Json& j, const std::string& path) {
        detail::Object k(j, path, {"data_scale", "model_scale"});
        return ScaleKey{k.number("data_scale"), k.number("model_scale")};
      };
      spec.compare = std::make_pair(key(c.at("a"), "scaling.compare.a"), key(c.at("b"), "scaling.compare.b"));
    }
    cfg.scaling = spec;
  }

  if (o.has("fl")) {
    detail::Object f(o.at("fl"), "fl", {"device_power_kw", "router_power_kw", "edge_intensity", "logs_csv", "totals"});
    FLSpec spec;
    spec.device_power_kw = f.number_or("device_power_kw", kDefaultDevicePowerKw);
    spec.router_power_kw = f.number_or("router_power_kw", kDefaultRouterPowerKw);
    spec.edge_intensity = detail::read_intensity(f.at("edge_intensity"), "fl.edge_intensity");
    spec.logs_csv = f.opt_string("logs_csv");
    if (f.has("totals")) {
      detail::Object t(f.at("totals"), "fl.totals", {"compute_h", "download_h", "upload_h"});
      spec.totals = FLClientLog{t.number("compute_h"), t.number("download_h"), t.number("upload_h")};
    }
    if (spec.logs_csv.has_value() == spec.totals.has_value()) {
      throw ParseError("fl: exactly one of logs_csv, totals is required");
    }
    if (!(spec.device_power_kw > 0.0)) throw ParseError("fl.device_power_kw: must be > 0");
    if (!(spec.router_power_kw > 0.0)) throw ParseError("fl.router_power_kw: must be > 0");
    cfg.fl = spec;
  }

  if (o.has("schedule")) {
    detail::Object s(o.at("schedule"), "schedule",
                     {"policy", "threshold_g_per_kwh", "pue", "horizon_h", "jobs_csv", "generate", "regions"});
    ScheduleSpec spec;
    spec.policy = detail::read_policy(s);
    if (spec.policy.kind != PolicyKind::ThresholdDelay && s.has("threshold_g_per_kwh")) {
      throw ParseError("schedule.threshold_g_per_kwh: only valid with policy threshold_delay");
    }
    spec.pue = s.number_or("pue", kDefaultPue);
    if (!(spec.pue >= 1.0)) throw ParseError("schedule.pue: must be >= 1.0");
    spec.horizon_h = s.opt_number("horizon_h");
    spec.jobs_csv = s.opt_string("jobs_csv");
    if (s.has("generate")) {
      detail::Object g(s.at("generate"), "schedule.generate",
                       {"p50_gpu_days", "p99_gpu_days", "count", "nodes", "horizon_h", "slack_h", "seed"});
      JobGeneration gen;
      gen.p50_gpu_days = g.number("p50_gpu_days");
      gen.p99_gpu_days = g.number("p99_gpu_days");
      const auto count = g.integer("count");
      if (count < 0) throw ParseError("schedule.generate.count: must be >= 0");
      gen.count = static_cast<std::uint64_t>(count);
      if (g.has("nodes")) {
        const auto nodes = g.integer("nodes");
        detail::require_positive_int(nodes, "schedule.generate.nodes");
        gen.nodes = static_cast<int>(nodes);
      }
      gen.horizon_h = g.number_or("horizon_h", gen.horizon_h);
      gen.slack_h = g.number_or("slack_h", gen.slack_h);
      if (g.has("seed")) {
        const auto seed = g.integer("seed");
        if (seed < 0) throw ParseError("schedule.generate.seed: must be >= 0");
        gen.seed = static_cast<std::uint64_t>(seed);
      }
      spec.generate = gen;
    }
    if (spec.jobs_csv.has_value() == spec.generate.has_value()) {
      throw ParseError("schedule: exactly one of jobs_csv, generate is required");
    }
    const auto& regions = s.array("regions");
    if (regions.empty()) throw ParseError("schedule.regions: at least one region is required");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const auto path = s.child("regions", i);
      detail::Object r(regions[i], path, {"name", "capacity_nodes", "platform", "intensity"});
      RegionSpec region;
      region.name = r.string("name");
      const auto cap = r.integer("capacity_nodes");
      detail::require_positive_int(cap, path + ".capacity_nodes");
      region.capacity_nodes = static_cast<int>(cap);
      region.platform = r.string("platform");
      detail::find_platform(cfg.platforms, region.platform, path + ".platform");
      region.intensity = detail::read_intensity(r.at("intensity"), path + ".intensity");
      spec.regions.push_back(std::move(region));
    }
    cfg.schedule = spec;
  }
  return cfg;
}

inline Config parse_config(const std::filesystem::path& path) {
  return parse_config_text(read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Resolution of referenced data

inline std::vector<ScalingPoint> scaling_points(const Config& cfg) {
  if (!cfg.scaling) throw Error("config has no scaling section");
  if (cfg.scaling->csv) return ingest_scaling(cfg.base_dir / *cfg.scaling->csv);
  return cfg.scaling->points;
}

inline FLCampaign fl_campaign(const Config& cfg) {
  if (!cfg.fl) throw Error("config has no fl section");
  FLCampaign c;
  c.device_power_kw = cfg.fl->device_power_kw;
  c.router_power_kw = cfg.fl->router_power_kw;
  c.edge_intensity = resolve_intensity(cfg.fl->edge_intensity, cfg.base_dir);
  if (cfg.fl->logs_csv) {
    c.logs = ingest_fl_logs(cfg.base_dir / *cfg.fl->logs_csv);
  } else {
    c.logs = {*cfg.fl->totals};
  }
  return c;
}

/// Jobs from the referenced CSV, or sampled; `seed` overrides the configured seed.
inline std::vector<Job> schedule_jobs(const Config& cfg, std::optional<std::uint64_t> seed = std::nullopt) {
  if (!cfg.schedule) throw Error("config has no schedule section");
  const auto& s = *cfg.schedule;
  if (s.jobs_csv) return ingest_jobs(cfg.base_dir / *s.jobs_csv);
  const auto& g = *s.generate;
  const auto params = lognormal_from_quantiles(g.p50_gpu_days, g.p99_gpu_days);
  return sample_jobs(params, g.count, seed.value_or(g.seed), JobSampling{g.nodes, g.horizon_h, g.slack_h});
}

inline std::vector<RegionModel> schedule_regions(const Config& cfg) {
  if (!cfg.schedule) throw Error("config has no schedule section");
  std::vector<RegionModel> out;
  for (const auto& r : cfg.schedule->regions) {
    out.push_back({r.name, resolve_intensity(r.intensity, cfg.base_dir), r.capacity_nodes,
                   detail::find_platform(cfg.platforms, r.platform, "schedule.regions")});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Writing

namespace detail {

inline Json write_intensity(const IntensitySpec& spec) {
  Json j;
  j["mode"] = std::string(to_string(spec.mode));
  if (spec.csv) {
    j["csv"] = *spec.csv;
  } else if (spec.constant_g_per_kwh) {
    j["constant_g_per_kwh"] = *spec.constant_g_per_kwh;
  } else {
    Json samples = Json::array();
    for (const auto& s : spec.samples) samples.push_back(Json::array({s.timestamp_h, s.g_per_kwh}));
    j["samples"] = std::move(samples);
  }
  return j;
}

}  // namespace detail

inline Json config_to_json(const Config& cfg) {
  Json j;
  j["name"] = cfg.task.name;
  j["pue"] = cfg.task.pue;
  j["renewable_matching"] = cfg.task.renewable_matching;
  j["intensity"] = detail::write_intensity(cfg.intensity);
  if (cfg.kg_per_mile) j["kg_per_mile"] = *cfg.kg_per_mile;

  if (!cfg.platforms.empty()) {
    Json platforms = Json::array();
    for (const auto& p : cfg.platforms) {
      Json pj;
      pj["name"] = p.name;
      pj["device_power_kw"] = p.device_power_kw;
      pj["embodied_kgco2e"] = p.embodied_kgco2e;
      pj["lifetime_h"] = p.lifetime_h;
      pj["accelerated"] = p.accelerated;
      platforms.push_back(std::move(pj));
    }
    j["platforms"] = std::move(platforms);
  }

  if (!cfg.task.phases.empty()) {
    Json phases = Json::array();
    for (const auto& p : cfg.task.phases) {
      Json pj;
      pj["kind"] = std::string(to_string(p.kind));
      pj["platform"] = p.platform.name;
      pj["node_count"] = p.node_count;
      pj["duration_h"] = p.duration_h;
      pj["utilization"] = p.utilization;
      phases.push_back(std::move(pj));
    }
    j["phases"] = std::move(phases);
  }

  if (!cfg.ledgers.empty()) {
    Json ledgers = Json::array();
    for (const auto& l : cfg.ledgers) {
      Json lj;
      if (l.preset) {
        lj["preset"] = *l.preset;
      } else {
        lj["name"] = l.ledger.name;
        Json factors = Json::array();
        for (const auto& f : l.ledger.factors) {
          factors.push_back(
              Json{{"name", f.name}, {"category", std::string(to_string(f.category))}, {"multiplier", f.multiplier}});
        }
        lj["factors"] = std::move(factors);
      }
      ledgers.push_back(std::move(lj));
    }
    j["ledgers"] = std::move(ledgers);
  }

  if (!cfg.quantization.empty()) {
    Json q = Json::array();
    for (const auto& row : cfg.quantization) {
      q.push_back(Json{{"model", row.model}, {"bits_from", row.bits_from}, {"bits_to", row.bits_to}});
    }
    j["quantization"] = std::move(q);
  }

  if (cfg.trend) {
    j["trend"] = Json{{"periods", cfg.trend->periods},
                      {"efficiency_per_period", cfg.trend->efficiency_per_period},
                      {"growth_per_period", cfg.trend->growth_per_period}};
  }

  if (cfg.sweep) {
    Json sj;
    if (cfg.sweep->kind == SweepKind::Utilization) {
      sj["kind"] = "utilization";
      sj["baseline_utilization"] = cfg.sweep->baseline_utilization;
      sj["targets"] = cfg.sweep->values;
    } else {
      sj["kind"] = "renewable";
      sj["fractions"] = cfg.sweep->values;
    }
    j["sweep"] = std::move(sj);
  }

  if (cfg.scaling) {
    Json sj;
    if (cfg.scaling->csv) {
      sj["csv"] = *cfg.scaling->csv;
    } else {
      Json points = Json::array();
      for (const auto& p : cfg.scaling->points) {
        points.push_back(Json{{"data_scale", p.data_scale},
                              {"model_scale", p.model_scale},
                              {"energy_per_step_kwh", p.energy_per_step},
                              {"quality_error", p.quality_error}});
      }
      sj["points"] = std::move(points);
    }
    if (cfg.scaling->compare) {
      const auto& [a, b] = *cfg.scaling->compare;
      sj["compare"] = Json{{"a", Json{{"data_scale", a.data_scale}, {"model_scale", a.model_scale}}},
                           {"b", Json{{"data_scale", b.data_scale}, {"model_scale", b.model_scale}}}};
    }
    j["scaling"] = std::move(sj);
  }

  if (cfg.fl) {
    Json fj;
    fj["device_power_kw"] = cfg.fl->device_power_kw;
    fj["router_power_kw"] = cfg.fl->router_power_kw;
    fj["edge_intensity"] = detail::write_intensity(cfg.fl->edge_intensity);
    if (cfg.fl->logs_csv) {
      fj["logs_csv"] = *cfg.fl->logs_csv;
    } else {
      fj["totals"] = Json{{"compute_h", cfg.fl->totals->compute_h},
                          {"download_h", cfg.fl->totals->download_h},
                          {"upload_h", cfg.fl->totals->upload_h}};
    }
    j["fl"] = std::move(fj);
  }

  if (cfg.schedule) {
    const auto& s = *cfg.schedule;
    Json sj;
    sj["policy"] = to_string(s.policy);
    if (s.policy.kind == PolicyKind::ThresholdDelay) sj["threshold_g_per_kwh"] = s.policy.threshold_g_per_kwh;
    sj["pue"] = s.pue;
    if (s.horizon_h) sj["horizon_h"] = *s.horizon_h;
    if (s.jobs_csv) {
      sj["jobs_csv"] = *s.jobs_csv;
    } else {
      const auto& g = *s.generate;
      sj["generate"] = Json{{"p50_gpu_days", g.p50_gpu_days}, {"p99_gpu_days", g.p99_gpu_days},
                            {"count", g.count},               {"nodes", g.nodes},
                            {"horizon_h", g.horizon_h},       {"slack_h", g.slack_h},
                            {"seed", g.seed}};
    }
    Json regions = Json::array();
    for (const auto& r : s.regions) {
      regions.push_back(Json{{"name", r.name},
                             {"capacity_nodes", r.capacity_nodes},
                             {"platform", r.platform},
                             {"intensity", detail::write_intensity(r.intensity)}});
    }
    sj["regions"] = std::move(regions);
    j["schedule"] = std::move(sj);
  }
  return j;
}

/// Canonical text form of a config.
inline std::string emit_config(const Config& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

}  // namespace aicarbon::io
