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
// aicarbon: lifecycle carbon estimates, sweeps and reports from a task config.
//
// Results go to stdout (or --out). Failures print one JSON object on stderr and
// exit nonzero. Every successful run appends a record to the run log
// ($AICARBON_RUNLOG, default ./aicarbon-runs.jsonl).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aicarbon/aicarbon.hpp"

namespace {

namespace fs = std::filesystem;
using aicarbon::io::Json;

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

struct Options {
  std::string config;
  std::string intensity;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format;
};

struct Output {
  std::string text;
  double total_kgco2e = 0.0;
  double energy_kwh = 0.0;
};

class UsageError : public aicarbon::Error {
 public:
  using aicarbon::Error::Error;
};

std::string format_or(const Options& o, const char* fallback) { return o.format.empty() ? fallback : o.format; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw UsageError("format '" + format + "' is not supported by " + cmd);
}

/// Config files whose bytes feed the result, relative to the config directory.
std::map<std::string, std::string> input_digests(const aicarbon::io::Config& cfg, const Options& o) {
  std::map<std::string, std::string> out;
  auto add = [&](const std::optional<std::string>& rel) {
    if (rel) out[*rel] = aicarbon::io::file_digest(cfg.base_dir / *rel);
  };
  out[o.config] = aicarbon::io::file_digest(o.config);
  if (!o.intensity.empty()) out[o.intensity] = aicarbon::io::file_digest(o.intensity);
  add(cfg.intensity.csv);
  if (cfg.scaling) add(cfg.scaling->csv);
  if (cfg.fl) {
    add(cfg.fl->logs_csv);
    add(cfg.fl->edge_intensity.csv);
  }
  if (cfg.schedule) {
    add(cfg.schedule->jobs_csv);
    for (const auto& r : cfg.schedule->regions) add(r.intensity.csv);
  }
  return out;
}

std::string breakdown_csv(const aicarbon::CarbonBreakdown& b) {
  std::ostringstream out;
  out.precision(17);
  out << "phase,operational_energy_kwh,operational_kgco2e,embodied_kgco2e,total_kgco2e\n";
  for (const auto& p : b.phases) {
    out << aicarbon::to_string(p.kind) << ',' << p.operational_energy_kwh << ',' << p.operational.net_kgco2e << ','
        << p.embodied_kgco2e << ',' << p.total_kgco2e() << '\n';
  }
  return out.str();
}

aicarbon::io::CardOptions card_options(const aicarbon::io::Config& cfg, const Options& o) {
  aicarbon::io::CardOptions card;
  card.kg_per_mile = cfg.kg_per_mile.value_or(aicarbon::kDefaultKgPerMile);
  if (!o.intensity.empty()) {
    card.intensity_source = fs::path(o.intensity).filename().string();
  } else if (cfg.intensity.csv) {
    card.intensity_source = *cfg.intensity.csv;
  }
  card.config_digest = aicarbon::io::config_digest(cfg);
  return card;
}

Output run_estimate(const aicarbon::io::Config& cfg, const Options& o) {
  const auto format = format_or(o, "json");
  require_format(format, {"json", "csv", "md"}, "estimate");
  const auto b = aicarbon::footprint(cfg.task);
  Output out{"", b.total_kgco2e(), b.energy_kwh()};
  if (format == "json") {
    out.text = aicarbon::io::emit_report(
        aicarbon::io::estimate_report(cfg.task, b, cfg.kg_per_mile.value_or(aicarbon::kDefaultKgPerMile)));
  } else if (format == "csv") {
    out.text = breakdown_csv(b);
  } else {
    out.text = aicarbon::io::emit_model_card(cfg.task, b, card_options(cfg, o));
  }
  return out;
}

Output run_card(const aicarbon::io::Config& cfg, const Options& o) {
  require_format(format_or(o, "md"), {"md"}, "card");
  const auto b = aicarbon::footprint(cfg.task);
  return {aicarbon::io::emit_model_card(cfg.task, b, card_options(cfg, o)), b.total_kgco2e(), b.energy_kwh()};
}

Output run_sweep(const aicarbon::io::Config& cfg, const Options& o) {
  const auto format = format_or(o, "json");
  require_format(format, {"json", "csv"}, "sweep");
  if (!cfg.sweep) throw UsageError("config has no sweep section");
  const auto b = aicarbon::footprint(cfg.task);
  const auto result = cfg.sweep->kind == aicarbon::io::SweepKind::Utilization
                          ? aicarbon::utilization_sweep(b, cfg.sweep->baseline_utilization, cfg.sweep->values)
                          : aicarbon::renewable_sweep(b, cfg.sweep->values);
  Output out{"", b.total_kgco2e(), b.energy_kwh()};
  out.text = format == "csv" ? aicarbon::io::sweep_csv(result) : aicarbon::io::emit_report(aicarbon::io::to_json(result));
  return out;
}

Output run_ledger(const aicarbon::io::Config& cfg, const Options& o) {
  require_format(format_or(o, "json"), {"json"}, "ledger");
  if (cfg.ledgers.empty() && !cfg.trend && cfg.quantization.empty()) {
    throw UsageError("config has no ledgers, trend or quantization section");
  }
  Json report;
  report["report"] = "ledger";
  report["task"] = cfg.task.name;
  Output out;

  std::optional<aicarbon::CarbonBreakdown> baseline;
  if (!cfg.task.phases.empty()) baseline = aicarbon::footprint(cfg.task);

  Json ledgers = Json::array();
  for (const auto& spec : cfg.ledgers) {
    auto lj = aicarbon::io::to_json(spec.ledger);
    if (baseline) {
      const double gain = aicarbon::compose(spec.ledger);
      const auto after = aicarbon::apply_gain(*baseline, gain);
      lj["applied"] = Json{{"operational_energy_kwh_before", baseline->energy_kwh()},
                           {"operational_energy_kwh_after", after.energy_kwh()},
                           {"operational_kgco2e_before", baseline->operational_kgco2e()},
                           {"operational_kgco2e_after", after.operational_kgco2e()},
                           {"embodied_kgco2e", after.embodied_kgco2e()},
                           {"total_kgco2e_after", after.total_kgco2e()}};
      if (ledgers.empty()) out = {"", after.total_kgco2e(), after.energy_kwh()};
    }
    ledgers.push_back(std::move(lj));
  }
  report["ledgers"] = std::move(ledgers);

  if (cfg.trend) {
    report["trend"] = aicarbon::io::to_json(*cfg.trend, aicarbon::net_trend(*cfg.trend));
  }
  if (!cfg.quantization.empty()) {
    Json q = Json::array();
    for (const auto& row : cfg.quantization) {
      q.push_back(aicarbon::io::to_json(aicarbon::quantization_delta(row.model, row.bits_from, row.bits_to)));
    }
    report["quantization"] = std::move(q);
  }
  out.text = aicarbon::io::emit_report(report);
  return out;
}

Output run_pareto(const aicarbon::io::Config& cfg, const Options& o) {
  const auto format = format_or(o, "json");
  require_format(format, {"json", "csv"}, "pareto");
  const auto points = aicarbon::io::scaling_points(cfg);
  if (points.empty()) throw UsageError("no scaling points");
  const auto indices = aicarbon::pareto_indices(points);
  const auto frontier = aicarbon::pareto_frontier(points);

  if (format == "csv") {
    std::ostringstream csv;
    csv.precision(17);
    csv << "index,data_scale,model_scale,energy_per_step_kwh,quality_error\n";
    for (auto i : indices) {
      const auto& p = points[i];
      csv << i << ',' << p.data_scale << ',' << p.model_scale << ',' << p.energy_per_step << ',' << p.quality_error
          << '\n';
    }
    return {csv.str(), 0.0, 0.0};
  }

  Json report;
  report["report"] = "pareto";
  report["points"] = points.size();
  Json fj = Json::array();
  for (const auto& p : frontier) fj.push_back(aicarbon::io::to_json(p));
  report["frontier_indices"] = indices;
  report["frontier"] = std::move(fj);
  report["fit_frontier"] = frontier.size() >= 2 ? aicarbon::io::to_json(aicarbon::powerlaw_fit(frontier)) : Json(nullptr);
  report["fit_all"] = aicarbon::io::to_json(aicarbon::powerlaw_fit(points));
  if (cfg.scaling->compare) {
    const auto& [a, b] = *cfg.scaling->compare;
    const auto cmp = aicarbon::compare_scaling(aicarbon::find_point(points, a.data_scale, a.model_scale),
                                               aicarbon::find_point(points, b.data_scale, b.model_scale));
    report["compare"] = Json{{"energy_ratio", cmp.energy_ratio}, {"error_delta", cmp.error_delta}};
  }
  return {aicarbon::io::emit_report(report), 0.0, 0.0};
}

Output run_fl(const aicarbon::io::Config& cfg, const Options& o) {
  require_format(format_or(o, "json"), {"json"}, "fl");
  auto campaign = aicarbon::io::fl_campaign(cfg);
  if (!o.intensity.empty()) {
    campaign.edge_intensity = aicarbon::io::ingest_intensity(o.intensity, campaign.edge_intensity.mode);
  }
  const auto energy = aicarbon::fl_energy(campaign);
  const double kg = aicarbon::fl_carbon(campaign);
  return {aicarbon::io::emit_report(aicarbon::io::fl_report(campaign, energy, kg)), kg, energy.total_kwh()};
}

Output run_schedule(const aicarbon::io::Config& cfg, const Options& o) {
  require_format(format_or(o, "json"), {"json"}, "schedule");
  if (!cfg.schedule) throw UsageError("config has no schedule section");
  if (!o.intensity.empty()) throw UsageError("schedule reads per-region intensity from the config; drop --intensity");
  const auto jobs = aicarbon::io::schedule_jobs(cfg, o.seed);
  const auto regions = aicarbon::io::schedule_regions(cfg);
  aicarbon::SimulationOptions sim{cfg.schedule->pue, cfg.schedule->horizon_h};

  const auto baseline = aicarbon::simulate(jobs, regions, aicarbon::Policy::immediate(), sim);
  const auto policy = aicarbon::simulate(jobs, regions, cfg.schedule->policy, sim);
  const auto tradeoff = aicarbon::policy_tradeoff(baseline, policy);

  Json report;
  report["report"] = "schedule";
  report["jobs"] = jobs.size();
  if (cfg.schedule->generate) report["seed"] = o.seed.value_or(cfg.schedule->generate->seed);
  report["baseline"] = aicarbon::io::to_json(baseline);
  report["policy"] = aicarbon::io::to_json(policy);
  report["tradeoff"] = aicarbon::io::to_json(tradeoff);
  return {aicarbon::io::emit_report(report), policy.operational_kgco2e + policy.overprovision_embodied_kgco2e,
          policy.energy_kwh};
}

void print_error(const std::string& kind, const std::string& message,
                 const std::vector<aicarbon::Violation>& violations = {}) {
  Json err{{"error", kind}, {"message", message}};
  if (!violations.empty()) {
    Json v = Json::array();
    for (const auto& x : violations) v.push_back(Json{{"field", x.field}, {"rule", x.rule}});
    err["violations"] = std::move(v);
  }
  std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifecycle carbon accounting for ML workloads", "aicarbon"};
  app.set_version_flag("--version", std::string(aicarbon::kVersion));
  app.require_subcommand(1);

  Options opts;
  struct Command {
    const char* name;
    const char* help;
    Output (*run)(const aicarbon::io::Config&, const Options&);
  };
  const Command commands[] = {
      {"estimate", "operational and embodied footprint per phase", run_estimate},
      {"sweep", "utilization or renewable-matching what-if sweep", run_sweep},
      {"ledger", "efficiency ledgers, demand trend and quantization deltas", run_ledger},
      {"pareto", "energy/quality Pareto frontier and power-law fit", run_pareto},
      {"fl", "federated-learning campaign energy and carbon", run_fl},
      {"schedule", "carbon-aware scheduling simulation", run_schedule},
      {"card", "markdown carbon impact statement", run_card},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opts.config, "task config file")->required();
    sub->add_option("--intensity", opts.intensity, "grid intensity CSV (timestamp_h,g_per_kwh)");
    sub->add_option("--out", opts.out, "write the result here instead of stdout");
    sub->add_option("--seed", opts.seed, "seed for sampled workloads");
    sub->add_option("--format", opts.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return kExitInvalid;
  }

  const Command* selected = nullptr;
  for (const auto& c : commands) {
    if (app.got_subcommand(c.name)) selected = &c;
  }

  try {
    auto cfg = aicarbon::io::parse_config(opts.config);
    if (!opts.intensity.empty()) {
      cfg.task.intensity = aicarbon::io::ingest_intensity(opts.intensity, cfg.task.intensity.mode);
      if (auto v = aicarbon::validate(cfg.task); !v.empty()) throw aicarbon::ValidationError(std::move(v));
    }
    const auto result = selected->run(cfg, opts);

    if (opts.out.empty()) {
      std::cout << result.text;
      std::cout.flush();
    } else {
      std::ofstream f(opts.out, std::ios::binary | std::ios::trunc);
      if (!f) throw aicarbon::io::IoError("cannot write " + opts.out);
      f << result.text;
      if (!f) throw aicarbon::io::IoError("cannot write " + opts.out);
    }

    aicarbon::io::RunRecord record;
    record.timestamp = aicarbon::io::utc_now();
    record.subcommand = selected->name;
    record.config_path = fs::absolute(opts.config).string();
    record.config_digest = aicarbon::io::config_digest(cfg);
    record.input_digests = input_digests(cfg, opts);
    record.total_kgco2e = result.total_kgco2e;
    record.energy_kwh = result.energy_kwh;
    aicarbon::io::append_run_record(aicarbon::io::runlog_path(), record);
  } catch (const aicarbon::ValidationError& e) {
    print_error("validation", e.what(), e.violations());
    return kExitInvalid;
  } catch (const aicarbon::io::ParseError& e) {
    print_error("config", e.what());
    return kExitInvalid;
  } catch (const aicarbon::io::IoError& e) {
    print_error("io", e.what());
    return kExitIo;
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return kExitInvalid;
  } catch (const aicarbon::Error& e) {
    print_error("compute", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitInvalid;
  }
  return EXIT_SUCCESS;
}
