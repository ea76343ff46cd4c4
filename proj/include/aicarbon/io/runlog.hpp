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

// Append-only run log: one JSON object per line. Each record is written with a
// single write(2) on an O_APPEND descriptor, so concurrent processes never
// interleave partial records.

#include <fcntl.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aicarbon/core.hpp"
#include "aicarbon/io/config.hpp"
#include "aicarbon/io/csv.hpp"

namespace aicarbon::io {

inline constexpr const char* kRunLogEnv = "AICARBON_RUNLOG";
inline constexpr const char* kDefaultRunLog = "aicarbon-runs.jsonl";

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

/// Digest of the canonical config text, stable across re-serialization.
inline std::string config_digest(const Config& cfg) { return "sha256:" + sha256_hex(emit_config(cfg)); }

inline std::string file_digest(const std::filesystem::path& path) { return "sha256:" + sha256_hex(read_file(path)); }

struct RunRecord {
  std::string timestamp;  ///< UTC, ISO 8601
  std::string subcommand;
  std::string config_path;
  std::string config_digest;
  std::map<std::string, std::string> input_digests;
  double total_kgco2e = 0.0;
  double energy_kwh = 0.0;
  std::string version{kVersion};

  bool operator==(const RunRecord&) const = default;
};

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string to_line(const RunRecord& r) {
  Json inputs = Json::object();
  for (const auto& [k, v] : r.input_digests) inputs[k] = v;
  Json j{{"timestamp", r.timestamp},
         {"subcommand", r.subcommand},
         {"config_path", r.config_path},
         {"config_digest", r.config_digest},
         {"input_digests", std::move(inputs)},
         {"total_kgco2e", r.total_kgco2e},
         {"energy_kwh", r.energy_kwh},
         {"version", r.version}};
  return j.dump() + "\n";
}

inline RunRecord from_line(std::string_view line) {
  const auto j = Json::parse(line);
  RunRecord r;
  r.timestamp = j.at("timestamp").get<std::string>();
  r.subcommand = j.at("subcommand").get<std::string>();
  r.config_path = j.at("config_path").get<std::string>();
  r.config_digest = j.at("config_digest").get<std::string>();
  for (const auto& item : j.at("input_digests").items()) r.input_digests[item.key()] = item.value().get<std::string>();
  r.total_kgco2e = j.at("total_kgco2e").get<double>();
  r.energy_kwh = j.at("energy_kwh").get<double>();
  r.version = j.at("version").get<std::string>();
  return r;
}

inline std::filesystem::path runlog_path() {
  if (const char* env = std::getenv(kRunLogEnv); env != nullptr && *env != '\0') return env;
  return kDefaultRunLog;
}

inline void append_run_record(const std::filesystem::path& path, const RunRecord& record) {
  const auto line = to_line(record);
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open run log " + path.string() + ": " + std::strerror(errno));
  ssize_t written;
  do {
    written = ::write(fd, line.data(), line.size());
  } while (written < 0 && errno == EINTR);
  const int saved = errno;
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) {
    throw IoError("short write to run log " + path.string() + ": " + std::strerror(saved));
  }
}

inline std::vector<RunRecord> read_run_log(const std::filesystem::path& path) {
  std::vector<RunRecord> out;
  if (!std::filesystem::exists(path)) return out;
  const auto text = read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    if (nl > pos) out.push_back(from_line(std::string_view(text).substr(pos, nl - pos)));
    pos = nl + 1;
  }
  return out;
}

/// Records whose config digest matches, oldest first.
inline std::vector<RunRecord> find_runs(const std::vector<RunRecord>& log, std::string_view digest) {
  std::vector<RunRecord> out;
  for (const auto& r : log) {
    if (r.config_digest == digest) out.push_back(r);
  }
  return out;
}

}  // namespace aicarbon::io
