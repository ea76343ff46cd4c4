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

// JSON reports and plot-ready CSV. Key order is fixed and every figure carries its
// unit in the key name, so emitting the same result twice is byte-identical.

#include <sstream>
#include <string>
#include <vector>

#include "aicarbon/edge_fl.hpp"
#include "aicarbon/io/config.hpp"
#include "aicarbon/ledger.hpp"
#include "aicarbon/lifecycle.hpp"
#include "aicarbon/scenario.hpp"
#include "aicarbon/sched_sim.hpp"

namespace aicarbon::io {

inline Json to_json(const CarbonBreakdown& b) {
  Json phases = Json::array();
  for (const auto& p : b.phases) {
    Json j;
    j["kind"] = std::string(to_string(p.kind));
    j["operational_energy_kwh"] = p.operational_energy_kwh;
    j["operational_gross_kgco2e"] = p.operational.gross_kgco2e;
    j["renewable_offset_kgco2e"] = p.operational.renewable_offset_kgco2e;
    j["operational_kgco2e"] = p.operational.net_kgco2e;
    j["embodied_kgco2e"] = p.embodied_kgco2e;
    j["embodied_capped"] = p.embodied_capped;
    j["total_kgco2e"] = p.total_kgco2e();
    phases.push_back(std::move(j));
  }
  Json totals;
  totals["operational_energy_kwh"] = b.energy_kwh();
  totals["operational_gross_kgco2e"] = b.operational_gross_kgco2e();
  totals["renewable_offset_kgco2e"] = b.renewable_offset_kgco2e();
  totals["operational_kgco2e"] = b.operational_kgco2e();
  totals["embodied_kgco2e"] = b.embodied_kgco2e();
  totals["total_kgco2e"] = b.total_kgco2e();
  return Json{{"phases", std::move(phases)}, {"totals", std::move(totals)}};
}

/// Footprint report for a task, including share summaries when defined.
inline Json estimate_report(const MLTask& task, const CarbonBreakdown& b, double kg_per_mile = kDefaultKgPerMile) {
  Json j;
  j["report"] = "estimate";
  j["task"] = task.name;
  j["pue"] = task.pue;
  j["accounting_mode"] = std::string(to_string(task.intensity.mode));
  j["renewable_matching"] = task.renewable_matching;
  auto body = to_json(b);
  j["phases"] = std::move(body["phases"]);
  j["totals"] = std::move(body["totals"]);
  Json shares;
  if (b.total_kgco2e() > 0.0) {
    const auto split = embodied_operational_split(b);
    shares["embodied_fraction"] = split.embodied;
    shares["operational_fraction"] = split.operational;
  }
  if (b.energy_kwh() > 0.0) {
    bool has_split = false;
    for (const auto& p : b.phases) has_split |= p.kind == PhaseKind::Inference || is_training(p.kind);
    if (has_split && b.operational_kgco2e() > 0.0) {
      const auto it = inference_training_split(b, Column::Operational);
      shares["inference_operational_fraction"] = it.inference;
      shares["training_operational_fraction"] = it.training;
    }
    Json energy = Json::array();
    for (double s : phase_shares(b, Column::Energy)) energy.push_back(s);
    shares["phase_energy_fractions"] = std::move(energy);
  }
  j["shares"] = shares.is_null() ? Json::object() : std::move(shares);
  j["equivalent_miles"] = equivalence(b.total_kgco2e(), kg_per_mile);
  return j;
}

inline Json to_json(const SweepResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back(Json{{"axis", r.axis},
                        {"operational_kgco2e", r.operational_kgco2e},
                        {"embodied_kgco2e", r.embodied_kgco2e},
                        {"total_kgco2e", r.total_kgco2e},
                        {"ratio", r.ratio}});
  }
  return Json{{"report", "sweep"}, {"axis", s.axis_name}, {"baseline_axis", s.baseline_axis}, {"rows", std::move(rows)}};
}

/// Plot data: axis, operational, embodied, total, ratio.
inline std::string sweep_csv(const SweepResult& s) {
  std::ostringstream out;
  out.precision(17);
  out << s.axis_name << ",operational_kgco2e,embodied_kgco2e,total_kgco2e,ratio\n";
  for (const auto& r : s.rows) {
    out << r.axis << ',' << r.operational_kgco2e << ',' << r.embodied_kgco2e << ',' << r.total_kgco2e << ','
        << r.ratio << '\n';
  }
  return out.str();
}

inline Json to_json(const Ledger& ledger) {
  Json factors = Json::array();
  for (const auto& f : ledger.factors) {
    factors.push_back(
        Json{{"name", f.name}, {"category", std::string(to_string(f.category))}, {"multiplier", f.multiplier}});
  }
  return Json{{"name", ledger.name}, {"factors", std::move(factors)}, {"aggregate_multiplier", compose(ledger)}};
}

inline Json to_json(const QuantizationDelta& q) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"model", q.model},
              {"bits_from", q.bits_from},
              {"bits_to", q.bits_to},
              {"size_reduction", opt(q.size_reduction)},
              {"bandwidth_reduction", opt(q.bandwidth_reduction)},
              {"latency_speedup", opt(q.latency_speedup)}};
}

inline Json to_json(const TrendSpec& spec, const std::vector<double>& series) {
  return Json{{"periods", spec.periods},
              {"efficiency_per_period", spec.efficiency_per_period},
              {"growth_per_period", spec.growth_per_period},
              {"net_multiplier", series},
              {"final_net_multiplier", series.back()},
              {"net_reduction", 1.0 - series.back()}};
}

inline Json to_json(const ScalingPoint& p) {
  return Json{{"data_scale", p.data_scale},
              {"model_scale", p.model_scale},
              {"energy_per_step_kwh", p.energy_per_step},
              {"quality_error", p.quality_error}};
}

inline Json to_json(const PowerLawFit& f) {
  return Json{{"coefficient", f.coefficient}, {"exponent", f.exponent}, {"log_residual", f.residual}};
}

inline Json fl_report(const FLCampaign& c, const FLEnergy& e, double kgco2e) {
  const auto totals = aggregate(c.logs);
  return Json{{"report", "fl"},
              {"clients", c.logs.size()},
              {"device_power_kw", c.device_power_kw},
              {"router_power_kw", c.router_power_kw},
              {"compute_h", totals.compute_h},
              {"download_h", totals.download_h},
              {"upload_h", totals.upload_h},
              {"compute_kwh", e.compute_kwh},
              {"comm_kwh", e.comm_kwh},
              {"total_kwh", e.total_kwh()},
              {"comm_share", e.comm_share()},
              {"edge_intensity_g_per_kwh", edge_mean_intensity(c)},
              {"operational_kgco2e", kgco2e}};
}

inline Json to_json(const ScheduleReport& r) {
  Json placements = Json::array();
  for (const auto& p : r.placements) {
    placements.push_back(Json{{"job", p.job_id},
                              {"region", r.regions[p.region]},
                              {"start_h", p.start_h},
                              {"end_h", p.end_h},
                              {"nodes", p.nodes},
                              {"delay_h", p.delay_h},
                              {"energy_kwh", p.energy_kwh},
                              {"operational_kgco2e", p.operational_kgco2e}});
  }
  return Json{{"policy", r.policy},
              {"regions", r.regions},
              {"energy_kwh", r.energy_kwh},
              {"operational_kgco2e", r.operational_kgco2e},
              {"peak_nodes", r.peak_nodes},
              {"peak_nodes_by_region", r.peak_nodes_by_region},
              {"reference", "immediate_peak"},
              {"reference_peak_by_region", r.reference_peak_by_region},
              {"horizon_h", r.horizon_h},
              {"overprovision_embodied_kgco2e", r.overprovision_embodied_kgco2e},
              {"mean_delay_h", r.mean_delay_h},
              {"max_delay_h", r.max_delay_h},
              {"makespan_end_h", r.makespan_end_h},
              {"placements", std::move(placements)}};
}

inline Json to_json(const PolicyTradeoff& t) {
  return Json{{"operational_savings_kgco2e", t.operational_savings_kgco2e},
              {"embodied_overhead_kgco2e", t.embodied_overhead_kgco2e},
              {"net_kgco2e", t.net_kgco2e}};
}

/// Serialized report text; identical inputs give identical bytes.
inline std::string emit_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace aicarbon::io
