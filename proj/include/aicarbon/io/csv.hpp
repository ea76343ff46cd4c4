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

// CSV readers for intensity traces, FL client logs, job lists and scaling points.
// Every file starts with a fixed header row. Errors carry the 1-based file line.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aicarbon/core.hpp"
#include "aicarbon/edge_fl.hpp"
#include "aicarbon/scenario.hpp"
#include "aicarbon/sched_sim.hpp"

namespace aicarbon::io {

class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.emplace_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Rows after the header; blank lines are skipped. The header must match exactly.
inline std::vector<CsvRow> parse_csv(std::string_view text, const std::vector<std::string>& header,
                                     const std::string& source) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty()) continue;
    auto cells = detail::split(line);
    if (!seen_header) {
      if (cells != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw IoError(source + ":" + std::to_string(line_no) + ": expected header '" + want + "'");
      }
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw IoError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                    " columns, got " + std::to_string(cells.size()));
    }
    rows.push_back({line_no, std::move(cells)});
  }
  if (!seen_header) throw IoError(source + ": missing header row");
  return rows;
}

inline double parse_number(const CsvRow& row, std::size_t col, const std::string& source) {
  const auto& cell = row.cells[col];
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !is_finite(value)) {
    throw IoError(source + ":" + std::to_string(row.line) + ": '" + cell + "' is not a number");
  }
  return value;
}

inline std::string row_error(const std::string& source, const CsvRow& row, const std::string& msg) {
  return source + ":" + std::to_string(row.line) + ": " + msg;
}

/// Intensity trace with header `timestamp_h,g_per_kwh`. Timestamps must strictly increase.
inline CarbonIntensitySeries parse_intensity_csv(std::string_view text, AccountingMode mode,
                                                 const std::string& source = "<intensity>") {
  CarbonIntensitySeries series;
  series.mode = mode;
  for (const auto& row : parse_csv(text, {"timestamp_h", "g_per_kwh"}, source)) {
    const double t = parse_number(row, 0, source);
    const double g = parse_number(row, 1, source);
    if (g < 0.0) throw IoError(row_error(source, row, "negative intensity"));
    if (!series.samples.empty()) {
      const double prev = series.samples.back().timestamp_h;
      if (t == prev) throw IoError(row_error(source, row, "duplicate timestamp"));
      if (t < prev) throw IoError(row_error(source, row, "timestamps out of order"));
    }
    series.samples.push_back({t, g});
  }
  if (series.samples.empty()) throw IoError(source + ": no samples");
  return series;
}

inline CarbonIntensitySeries ingest_intensity(const std::filesystem::path& path,
                                              AccountingMode mode = AccountingMode::LocationBased) {
  return parse_intensity_csv(read_file(path), mode, path.string());
}

inline std::string format_intensity_csv(const CarbonIntensitySeries& series) {
  std::ostringstream out;
  out.precision(17);
  out << "timestamp_h,g_per_kwh\n";
  for (const auto& s : series.samples) out << s.timestamp_h << ',' << s.g_per_kwh << '\n';
  return out.str();
}

/// Client logs with header `client_id,compute_s,download_s,upload_s`; seconds become hours.
inline std::vector<FLClientLog> parse_fl_logs_csv(std::string_view text, const std::string& source = "<fl-logs>") {
  std::vector<FLClientLog> logs;
  for (const auto& row : parse_csv(text, {"client_id", "compute_s", "download_s", "upload_s"}, source)) {
    FLClientLog log{parse_number(row, 1, source) / 3600.0, parse_number(row, 2, source) / 3600.0,
                    parse_number(row, 3, source) / 3600.0};
    if (log.compute_h < 0.0 || log.download_h < 0.0 || log.upload_h < 0.0) {
      throw IoError(row_error(source, row, "negative time"));
    }
    logs.push_back(log);
  }
  return logs;
}

inline std::vector<FLClientLog> ingest_fl_logs(const std::filesystem::path& path) {
  return parse_fl_logs_csv(read_file(path), path.string());
}

/// Jobs with header `id,gpu_days,nodes,arrival_h,slack_h`.
inline std::vector<Job> parse_jobs_csv(std::string_view text, const std::string& source = "<jobs>") {
  std::vector<Job> jobs;
  for (const auto& row : parse_csv(text, {"id", "gpu_days", "nodes", "arrival_h", "slack_h"}, source)) {
    Job job;
    job.id = row.cells[0];
    job.gpu_days = parse_number(row, 1, source);
    const double nodes = parse_number(row, 2, source);
    if (nodes < 1.0 || nodes != std::floor(nodes)) throw IoError(row_error(source, row, "nodes must be a positive integer"));
    job.nodes = static_cast<int>(nodes);
    job.arrival_h = parse_number(row, 3, source);
    job.slack_h = parse_number(row, 4, source);
    try {
      validate_job(job);
    } catch (const Error& e) {
      throw IoError(row_error(source, row, e.what()));
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

inline std::vector<Job> ingest_jobs(const std::filesystem::path& path) {
  return parse_jobs_csv(read_file(path), path.string());
}

inline std::string format_jobs_csv(const std::vector<Job>& jobs) {
  std::ostringstream out;
  out.precision(17);
  out << "id,gpu_days,nodes,arrival_h,slack_h\n";
  for (const auto& j : jobs) {
    out << j.id << ',' << j.gpu_days << ',' << j.nodes << ',' << j.arrival_h << ',' << j.slack_h << '\n';
  }
  return out.str();
}

/// Scaling measurements with header `data_scale,model_scale,energy_per_step_kwh,quality_error`.
inline std::vector<ScalingPoint> parse_scaling_csv(std::string_view text, const std::string& source = "<scaling>") {
  std::vector<ScalingPoint> points;
  for (const auto& row :
       parse_csv(text, {"data_scale", "model_scale", "energy_per_step_kwh", "quality_error"}, source)) {
    ScalingPoint p{parse_number(row, 0, source), parse_number(row, 1, source), parse_number(row, 2, source),
                   parse_number(row, 3, source)};
    try {
      validate_point(p);
    } catch (const Error& e) {
      throw IoError(row_error(source, row, e.what()));
    }
    points.push_back(p);
  }
  return points;
}

inline std::vector<ScalingPoint> ingest_scaling(const std::filesystem::path& path) {
  return parse_scaling_csv(read_file(path), path.string());
}

}  // namespace aicarbon::io
