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

#include <filesystem>
#include <string>

#include "aicarbon/core.hpp"

namespace aicarbon::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(AICARBON_DATA_DIR) / name;
}

inline std::filesystem::path golden_path(const std::string& name) {
  return std::filesystem::path(AICARBON_GOLDEN_DIR) / name;
}

inline HardwarePlatform gpu_node() { return HardwarePlatform{"gpu-node", 0.3, 2000.0, 35040.0, true}; }
inline HardwarePlatform cpu_node() { return HardwarePlatform{"cpu-node", 0.15, 1000.0, 35040.0, false}; }

inline PhaseProfile phase(PhaseKind kind, int nodes, double hours, HardwarePlatform platform = gpu_node()) {
  return PhaseProfile{kind, std::move(platform), nodes, hours, 1.0};
}

inline MLTask task_at(double g_per_kwh, std::vector<PhaseProfile> phases, double pue = 1.1) {
  MLTask t;
  t.name = "fixture";
  t.phases = std::move(phases);
  t.pue = pue;
  t.intensity = CarbonIntensitySeries::constant(g_per_kwh);
  return t;
}

}  // namespace aicarbon::testing
