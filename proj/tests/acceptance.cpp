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
// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero if
// any criterion fails.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aicarbon/aicarbon.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace aicarbon;

fs::path data(const std::string& name) { return fs::path(AICARBON_DATA_DIR) / name; }
fs::path golden(const std::string& name) { return fs::path(AICARBON_GOLDEN_DIR) / name; }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.tellp() > 0 ? "; " : "") << "failed: " << what;
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

void ledger_composition(Outcome& o) {
  const double agg = compose(lm_ledger());
  o.check(std::fabs(agg - 812.04) <= 1e-9, "compose = 812.04");
  o.check(agg > 800.0, "aggregate > 800");
  o.detail << "aggregate=" << agg;
}

void jevons_trend(Outcome& o) {
  const double final_value = net_trend({4, 0.20, 1.15}).back();
  o.check(within(final_value, 0.705, 0.725), "final in [0.705, 0.725]");
  o.detail << "final=" << final_value << " net_reduction=" << 1.0 - final_value;
}

void utilization_sweep_criterion(Outcome& o) {
  const auto cfg = io::parse_config(data("lm_utilization.task"));
  const auto b = footprint(cfg.task);
  const std::vector<double> at80{0.80};
  const double ratio = utilization_sweep(b, 0.267, at80).rows[0].ratio;
  o.check(within(ratio, 0.323, 0.343), "ratio(0.80) in [0.323, 0.343]");
  std::vector<double> targets;
  for (int i = 1; i <= 100; ++i) targets.push_back(i / 100.0);
  double worst = 0.0;
  for (const auto& r : utilization_sweep(b, 0.267, targets).rows) worst = std::max(worst, std::fabs(r.ratio * r.axis - 0.267));
  o.check(worst <= 1e-12, "ratio(u)*u constant to 1e-12");
  o.detail << "ratio(0.80)=" << ratio << " max_conservation_error=" << worst;
}

void renewable_factor(Outcome& o) {
  CarbonBreakdown b;
  b.phases.push_back({PhaseKind::OfflineTraining, 1.0, {70.0, 0.0, 70.0}, 30.0, false});
  const double r = renewable_fraction_for_ratio(b, 0.5);
  o.check(std::fabs(r - 5.0 / 7.0) <= 1e-9, "crossing at 5/7");
  const std::vector<double> fr{0.0, 5.0 / 7.0};
  const auto s = renewable_sweep(b, fr);
  o.check(std::fabs(s.rows[1].ratio - 0.5) <= 1e-9, "sweep ratio at 5/7 is 0.5");
  o.detail << "r=" << r << " ratio=" << s.rows[1].ratio;
}

void embodied_conservation(Outcome& o) {
  const HardwarePlatform gpu{"gpu-node", 0.3, 2000.0, 35040.0, true};
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> parts(1, 200);
  std::uniform_real_distribution<double> cut(0.0, gpu.lifetime_h);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> cuts{0.0, gpu.lifetime_h};
    for (int i = parts(rng); i > 1; --i) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) sum += embodied_attribution(gpu, cuts[i] - cuts[i - 1], 1.0).kgco2e;
    worst = std::max(worst, std::fabs(sum - gpu.embodied_kgco2e) / gpu.embodied_kgco2e);
  }
  o.check(worst <= 1e-9, "relative error <= 1e-9");
  o.detail << "partitions=1000 max_relative_error=" << worst;
}

void lm_golden_scenario(Outcome& o) {
  const auto lm = footprint(io::parse_config(data("lm.task")).task);
  const auto it = inference_training_split(lm, Column::Operational);
  o.check(std::fabs(100.0 * it.inference - 65.0) <= 0.5, "lm inference 65% +/- 0.5");
  o.check(std::fabs(100.0 * it.training - 35.0) <= 0.5, "lm training 35% +/- 0.5");

  const auto rm = footprint(io::parse_config(data("rm1.task")).task);
  const double d = group_share(rm, Column::Energy, [](PhaseKind k) { return k == PhaseKind::DataStorageIngestion; });
  const double t = group_share(rm, Column::Energy, is_training);
  const double i = group_share(rm, Column::Energy, [](PhaseKind k) { return k == PhaseKind::Inference; });
  o.check(std::fabs(100.0 * d - 31.0) <= 0.5, "rm1 data 31% +/- 0.5");
  o.check(std::fabs(100.0 * t - 29.0) <= 0.5, "rm1 exp+train 29% +/- 0.5");
  o.check(std::fabs(100.0 * i - 40.0) <= 0.5, "rm1 inference 40% +/- 0.5");
  o.detail << "lm inference/training=" << 100.0 * it.inference << "/" << 100.0 * it.training
           << " rm1 data/train/inference=" << 100.0 * d << "/" << 100.0 * t << "/" << 100.0 * i;
}

void quantile_fit(Outcome& o) {
  struct Case {
    double p50, p99, mu, sigma;
  };
  for (const auto& c : {Case{1.5, 24.0, 0.405465, 1.19182}, Case{2.96, 125.0, 1.08519, 1.60908}}) {
    const auto p = lognormal_from_quantiles(c.p50, c.p99);
    o.check(std::fabs(p.mu - c.mu) <= 1e-4 && std::fabs(p.sigma - c.sigma) <= 1e-4, "(mu, sigma) within 1e-4");
    std::vector<double> days;
    for (const auto& j : sample_jobs(p, 100'000, 12345)) days.push_back(j.gpu_days);
    const double e50 = empirical_quantile(days, 0.50);
    const double e99 = empirical_quantile(days, 0.99);
    o.check(std::fabs(e50 / c.p50 - 1.0) <= 0.05, "empirical p50 within 5%");
    o.check(std::fabs(e99 / c.p99 - 1.0) <= 0.05, "empirical p99 within 5%");
    o.detail << "(" << c.p50 << "," << c.p99 << ")->mu=" << p.mu << " sigma=" << p.sigma << " p50=" << e50
             << " p99=" << e99 << " ";
  }
}

void scheduler_oracle(Outcome& o) {
  std::mt19937_64 rng(8);
  int mismatches = 0;
  constexpr int kInstances = 2000;
  for (int trial = 0; trial < kInstances; ++trial) {
    const auto inst = oracle::small_instance(rng);
    const auto rep = simulate(inst.jobs, inst.regions, Policy::lowest_window(), {inst.pue, std::nullopt});
    if (rep.operational_kgco2e != oracle::exhaustive_minimum(inst.jobs, inst.regions, inst.pue)) ++mismatches;
  }
  o.check(mismatches == 0, "LowestWindow equals exhaustive minimum");

  int variant = 0;
  const auto params = lognormal_from_quantiles(0.05, 0.4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto jobs = sample_jobs(params, 12, rng(), {2, 24.0, 12.0});
    const std::vector<RegionModel> regions{
        {"a", CarbonIntensitySeries::constant(321.0), 64, {"p", 0.7, 2000.0, 35040.0, true}}};
    const double imm = simulate(jobs, regions, Policy::immediate()).operational_kgco2e;
    if (simulate(jobs, regions, Policy::lowest_window()).operational_kgco2e != imm ||
        simulate(jobs, regions, Policy::threshold_delay(100.0)).operational_kgco2e != imm) {
      ++variant;
    }
  }
  o.check(variant == 0, "constant intensity is policy-invariant");

  const auto cfg = io::parse_config(data("schedule_toy.task"));
  const auto jobs = io::schedule_jobs(cfg);
  const auto regions = io::schedule_regions(cfg);
  const SimulationOptions opts{cfg.schedule->pue, std::nullopt};
  const double imm = simulate(jobs, regions, Policy::immediate(), opts).operational_kgco2e;
  const double low = simulate(jobs, regions, Policy::lowest_window(), opts).operational_kgco2e;
  o.check(std::fabs(imm - 0.5) <= 1e-12 && std::fabs(low - 0.1) <= 1e-12, "toy 0.5 kg vs 0.1 kg");
  o.check(std::fabs(imm / low - 5.0) <= 1e-9, "toy 5x reduction");
  o.detail << "instances=" << kInstances << " mismatches=" << mismatches << " toy=" << imm << "/" << low;
}

void pareto_oracle(Outcome& o) {
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<std::size_t> n(1, 200);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto pts = oracle::random_points(rng, n(rng));
    if (pareto_indices(pts) != oracle::brute_force_frontier(pts)) ++mismatches;
  }
  o.check(mismatches == 0, "frontier equals brute force");
  o.detail << "instances=500 mismatches=" << mismatches;
}

void powerlaw_round_trip(Outcome& o) {
  std::vector<ScalingPoint> synthetic;
  for (double e : {0.25, 1.0, 3.0, 10.0, 64.0, 500.0}) synthetic.push_back({1, 1, e, std::pow(e, -0.003)});
  const auto fit = powerlaw_fit(synthetic);
  o.check(std::fabs(fit.exponent - 0.003) <= 1e-6, "synthetic p recovered to 1e-6");
  o.check(fit.residual <= 1e-20, "zero residual");

  const auto cfg = io::parse_config(data("rm_scaling.task"));
  const auto pts = io::scaling_points(cfg);
  const auto all = powerlaw_fit(pts);
  const auto frontier = pareto_frontier(pts);
  const auto front = powerlaw_fit(frontier);
  o.check(within(all.exponent, 0.002, 0.004), "shipped dataset exponent in [0.002, 0.004]");
  o.check(within(front.exponent, 0.002, 0.004), "shipped frontier exponent in [0.002, 0.004]");
  o.detail << "synthetic_p=" << fit.exponent << " residual=" << fit.residual << " shipped_p=" << all.exponent
           << " frontier_p=" << front.exponent;
}

void fl_estimator(Outcome& o) {
  const auto campaign = io::fl_campaign(io::parse_config(data("fl_million.task")));
  const auto e = fl_energy(campaign);
  o.check(std::fabs(e.compute_kwh - 3000.0) <= 1e-9 && std::fabs(e.comm_kwh - 1500.0) <= 1e-9, "(3000, 1500) kWh");
  o.check(campaign.device_power_kw == 0.003 && campaign.router_power_kw == 0.0075, "default 3 W / 7.5 W");

  const auto logs_campaign = io::fl_campaign(io::parse_config(data("fl.task")));
  const double base = fl_carbon(logs_campaign);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(0.01, 100.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double k = c(rng);
    auto scaled = logs_campaign;
    for (auto& l : scaled.logs) {
      l.compute_h *= k;
      l.download_h *= k;
      l.upload_h *= k;
    }
    worst = std::max(worst, std::fabs(fl_carbon(scaled) - k * base) / (k * base));
  }
  auto doubled = logs_campaign;
  doubled.logs.insert(doubled.logs.end(), logs_campaign.logs.begin(), logs_campaign.logs.end());
  o.check(worst <= 1e-12, "linear under random scaling");
  o.check(fl_carbon(doubled) == 2.0 * base, "doubling clients doubles carbon");
  o.detail << "energy=(" << e.compute_kwh << "," << e.comm_kwh << ") max_linearity_error=" << worst;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = "'" AICARBON_CLI "' " + args + " --out '" + out.string() + "'";
  return std::system(cmd.c_str());
}

void determinism_round_trip(Outcome& o) {
  int round_trips = 0;
  for (const auto& entry : fs::directory_iterator(AICARBON_DATA_DIR)) {
    if (entry.path().extension() != ".task") continue;
    const auto text = io::read_file(entry.path());
    const auto cfg = io::parse_config(entry.path());
    o.check(io::emit_config(cfg) == text, "byte-exact round trip of " + entry.path().filename().string());
    o.check(io::parse_config_text(io::emit_config(cfg), entry.path().parent_path()).task == cfg.task,
            "task equality after round trip of " + entry.path().filename().string());
    ++round_trips;
  }

  const auto cfg = io::parse_config(data("schedule_sampled.task"));
  const auto regions = io::schedule_regions(cfg);
  auto report = [&](std::uint64_t seed) {
    const auto jobs = io::schedule_jobs(cfg, seed);
    return io::emit_report(io::to_json(simulate(jobs, regions, cfg.schedule->policy, {cfg.schedule->pue, std::nullopt})));
  };
  o.check(report(99) == report(99), "identical seeds give identical reports");
  o.check(report(99) != report(100), "different seeds give different reports");

  const auto dir = fs::temp_directory_path() / ("aicarbon-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Golden {
    const char* subcommand;
    const char* config;
    const char* file;
  };
  for (const auto& g : {Golden{"ledger", "lm_ledger.task", "lm_ledger.json"},
                        Golden{"estimate", "lm.task", "lm_estimate.json"}}) {
    const auto out = dir / g.file;
    const int rc = run_cli(std::string(g.subcommand) + " --config '" + data(g.config).string() + "'", out);
    o.check(rc == 0 && fs::exists(out) && io::read_file(out) == io::read_file(golden(g.file)),
            std::string("golden ") + g.file);
  }
  const auto a = dir / "sched-a.json";
  const auto b = dir / "sched-b.json";
  run_cli("schedule --config '" + data("schedule_sampled.task").string() + "' --seed 5", a);
  run_cli("schedule --config '" + data("schedule_sampled.task").string() + "' --seed 5", b);
  o.check(io::read_file(a) == io::read_file(b), "CLI schedule reproducible under --seed");
  fs::remove_all(dir);
  o.detail << "configs_round_tripped=" << round_trips;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"ledger composition", ledger_composition},
      {"jevons trend", jevons_trend},
      {"utilization sweep", utilization_sweep_criterion},
      {"renewable factor", renewable_factor},
      {"embodied conservation", embodied_conservation},
      {"lm golden scenario", lm_golden_scenario},
      {"quantile fit", quantile_fit},
      {"scheduler oracle", scheduler_oracle},
      {"pareto oracle", pareto_oracle},
      {"power-law round trip", powerlaw_round_trip},
      {"fl estimator", fl_estimator},
      {"determinism and round-trip", determinism_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
