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

#include <functional>
#include <string>
#include <vector>

#include "aicarbon/accounting.hpp"
#include "aicarbon/core.hpp"

namespace aicarbon {

inline constexpr double kDefaultKgPerMile = 0.404;

/// Accounts every phase of the task.
///
/// Each phase draws its energy uniformly over [t0, t0 + duration), where t0 is the
/// first intensity timestamp. Embodied carbon is charged by reserved node-hours.
inline CarbonBreakdown footprint(const MLTask& task) {
  ensure_valid(task);
  CarbonBreakdown out;
  out.phases.reserve(task.phases.size());
  for (std::size_t i = 0; i < task.phases.size(); ++i) {
    const auto& phase = task.phases[i];
    try {
      PhaseCarbon rec;
      rec.kind = phase.kind;
      rec.operational_energy_kwh = operational_energy(phase, task.pue);
      if (phase.duration_h > 0.0) {
        const double t0 = task.intensity.start_h();
        rec.operational = operational_carbon(rec.operational_energy_kwh, task.intensity,
                                             Window{t0, t0 + phase.duration_h}, task.renewable_matching);
      }
      const auto embodied = embodied_attribution(phase.platform, phase.node_hours(), 1.0, phase.node_count);
      rec.embodied_kgco2e = embodied.kgco2e;
      rec.embodied_capped = embodied.capped;
      out.phases.push_back(rec);
    } catch (const Error& e) {
      throw Error("phases[" + std::to_string(i) + "] (" + std::string(to_string(phase.kind)) +
                  "): " + e.what());
    }
  }
  return out;
}

/// Fraction of the column total contributed by each phase, in phase order.
inline std::vector<double> phase_shares(const CarbonBreakdown& breakdown, Column column) {
  const double total = breakdown.total(column);
  if (!(total > 0.0)) throw Error("empty breakdown");
  std::vector<double> shares;
  shares.reserve(breakdown.phases.size());
  for (const auto& p : breakdown.phases) shares.push_back(breakdown.value(p, column) / total);
  return shares;
}

/// Share of the column total held by phases matching `pred`.
inline double group_share(const CarbonBreakdown& breakdown, Column column,
                          const std::function<bool(PhaseKind)>& pred) {
  const double total = breakdown.total(column);
  if (!(total > 0.0)) throw Error("empty breakdown");
  double part = 0.0;
  for (const auto& p : breakdown.phases) {
    if (pred(p.kind)) part += breakdown.value(p, column);
  }
  return part / total;
}

struct InferenceTrainingSplit {
  double inference = 0.0;
  double training = 0.0;
};

/// Inference vs training (experimentation plus offline and online training).
/// Data ingestion is excluded from both sides.
inline InferenceTrainingSplit inference_training_split(const CarbonBreakdown& breakdown,
                                                       Column column = Column::Operational) {
  double inference = 0.0;
  double training = 0.0;
  for (const auto& p : breakdown.phases) {
    if (p.kind == PhaseKind::Inference) inference += breakdown.value(p, column);
    if (is_training(p.kind)) training += breakdown.value(p, column);
  }
  const double sum = inference + training;
  if (!(sum > 0.0)) throw Error("empty breakdown");
  return {inference / sum, training / sum};
}

struct EmbodiedOperationalSplit {
  double embodied = 0.0;
  double operational = 0.0;
};

/// Embodied vs net operational share of the total footprint.
inline EmbodiedOperationalSplit embodied_operational_split(const CarbonBreakdown& breakdown) {
  const double embodied = breakdown.embodied_kgco2e();
  const double operational = breakdown.operational_kgco2e();
  const double total = embodied + operational;
  if (!(total > 0.0)) throw Error("empty breakdown");
  if (operational == 0.0) return {1.0, 0.0};
  if (embodied == 0.0) return {0.0, 1.0};
  return {embodied / total, operational / total};
}

/// Miles driven by an average passenger vehicle emitting the same carbon.
inline double equivalence(double kgco2e, double kg_per_mile = kDefaultKgPerMile) {
  if (!is_finite(kg_per_mile) || kg_per_mile <= 0.0) throw Error("kg_per_mile must be > 0");
  if (!is_finite(kgco2e) || kgco2e < 0.0) throw Error("carbon must be >= 0");
  return kgco2e / kg_per_mile;
}

}  // namespace aicarbon
