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

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "aicarbon/core.hpp"
#include "aicarbon/lifecycle.hpp"

namespace aicarbon::io {

/// Fixed-point rendering used for every figure in cards.
inline std::string fixed(double value, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000"
  return s;
}

inline std::string percent(double fraction) { return fixed(fraction * 100.0, 1) + "%"; }

struct CardOptions {
  double kg_per_mile = kDefaultKgPerMile;
  std::string intensity_source;  ///< e.g. "constant" or the CSV file name
  std::string config_digest;
};

inline std::string describe_intensity(const CarbonIntensitySeries& s, const std::string& source) {
  std::ostringstream out;
  out << to_string(s.mode) << ", ";
  if (s.is_constant()) {
    out << "constant " << fixed(s.samples.front().g_per_kwh, 1) << " gCO2e/kWh";
  } else {
    out << s.samples.size() << " samples from t=" << fixed(s.start_h(), 1) << " h";
  }
  if (!source.empty()) out << " (" << source << ")";
  return out.str();
}

/// Markdown carbon impact statement with Footprint, Assumptions, Equivalence and
/// Provenance sections. Figures are the breakdown's own numbers, rounded for display.
inline std::string emit_model_card(const MLTask& task, const CarbonBreakdown& b, const CardOptions& options = {}) {
  std::ostringstream md;
  const double total = b.total_kgco2e();

  md << "# Carbon Impact Statement: " << task.name << "\n\n";

  md << "## Footprint\n\n";
  md << "| Phase | Nodes | Duration (h) | Energy (kWh) | Operational (kgCO2e) | Embodied (kgCO2e) | Total (kgCO2e) | Share |\n";
  md << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (std::size_t i = 0; i < b.phases.size(); ++i) {
    const auto& p = b.phases[i];
    const auto& profile = task.phases[i];
    md << "| " << to_string(p.kind) << " | " << profile.node_count << " | " << fixed(profile.duration_h, 1) << " | "
       << fixed(p.operational_energy_kwh) << " | " << fixed(p.operational.net_kgco2e) << " | "
       << fixed(p.embodied_kgco2e) << " | " << fixed(p.total_kgco2e()) << " | "
       << percent(total > 0.0 ? p.total_kgco2e() / total : 0.0) << " |\n";
  }
  md << "| **Total** | | | " << fixed(b.energy_kwh()) << " | " << fixed(b.operational_kgco2e()) << " | "
     << fixed(b.embodied_kgco2e()) << " | " << fixed(total) << " | " << percent(total > 0.0 ? 1.0 : 0.0) << " |\n\n";

  double inference = 0.0;
  double training = 0.0;
  for (const auto& p : b.phases) {
    if (p.kind == PhaseKind::Inference) inference += p.operational.net_kgco2e;
    if (is_training(p.kind)) training += p.operational.net_kgco2e;
  }
  const double it_sum = inference + training;
  md << "- Inference vs training operational split: " << percent(it_sum > 0.0 ? inference / it_sum : 0.0) << " / "
     << percent(it_sum > 0.0 ? training / it_sum : 0.0) << "\n";
  md << "- Embodied vs operational split: " << percent(total > 0.0 ? b.embodied_kgco2e() / total : 0.0) << " / "
     << percent(total > 0.0 ? b.operational_kgco2e() / total : 0.0) << "\n";
  md << "- Gross operational before renewable matching: " << fixed(b.operational_gross_kgco2e()) << " kgCO2e\n";
  if (b.any_capped()) md << "- Warning: at least one phase reserved nodes beyond their lifetime; embodied capped\n";
  md << "\n";

  md << "## Assumptions\n\n";
  md << "- PUE: " << fixed(task.pue, 2) << " (operational energy only)\n";
  md << "- Carbon intensity: " << describe_intensity(task.intensity, options.intensity_source) << "\n";
  md << "- Renewable matching: " << percent(task.renewable_matching)
     << (task.intensity.mode == AccountingMode::MarketBased ? " (applied)" : " (ignored under location-based accounting)")
     << "\n";
  md << "- Embodied attribution: linear over platform lifetime by reserved node-hours\n";
  std::vector<std::string> seen;
  for (const auto& ph : task.phases) {
    const auto& p = ph.platform;
    bool dup = false;
    for (const auto& n : seen) dup |= n == p.name;
    if (dup) continue;
    seen.push_back(p.name);
    md << "- Platform " << p.name << ": " << fixed(p.device_power_kw) << " kW/node, " << fixed(p.embodied_kgco2e, 1)
       << " kgCO2e embodied, " << fixed(p.lifetime_h, 0) << " h lifetime, "
       << (p.accelerated ? "accelerated" : "cpu-only") << "\n";
  }
  md << "\n";

  md << "## Equivalence\n\n";
  md << "Total footprint of " << fixed(total) << " kgCO2e is equivalent to "
     << fixed(equivalence(total, options.kg_per_mile), 1) << " miles driven by an average passenger vehicle ("
     << fixed(options.kg_per_mile) << " kgCO2e/mile).\n\n";

  md << "## Provenance\n\n";
  md << "- Generated by aicarbon " << kVersion << "\n";
  md << "- Config digest: " << (options.config_digest.empty() ? "none" : options.config_digest) << "\n";
  return md.str();
}

}  // namespace aicarbon::io
