/* Copyright 2026 The gshare Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "gshare/profiles.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "gshare/errors.h"

namespace gshare {
namespace {

struct Record {
  std::size_t line = 0;
  FunctionId function_id;
  ProfileEntry entry;
  double slo_ms = 0.0;
  MemorySpec memory;
};

std::string Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double ParseNumber(std::string_view field, std::size_t line,
                   std::string_view name) {
  std::string text = Trim(field);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "field '" + std::string(name) +
                               "' is not a number: '" + text + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "field '" + std::string(name) + "' is not finite");
  }
  return value;
}

void ValidateRecord(const Record& r) {
  if (r.function_id.empty()) throw ParseError(r.line, "empty function_id");
  try {
    r.entry.point.Validate();
  } catch (const Error& e) {
    throw ParseError(r.line, e.what());
  }
  if (r.entry.throughput_rps < 0.0) {
    throw ParseError(r.line, "throughput_rps must be non-negative");
  }
  if (!(r.entry.p99_latency_ms > 0.0)) {
    throw ParseError(r.line, "p99_ms must be positive");
  }
  if (!(r.slo_ms > 0.0)) throw ParseError(r.line, "slo_ms must be positive");
  try {
    r.memory.Validate();
  } catch (const Error& e) {
    throw ParseError(r.line, e.what());
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::vector<Record> ReadCsv(std::istream& in, std::size_t first_line_no,
                            const std::string& header) {
  if (Trim(header) != kProfileCsvHeader) {
    throw ParseError(first_line_no, "unexpected CSV header '" + Trim(header) +
                                        "'; expected '" + kProfileCsvHeader +
                                        "'");
  }
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = first_line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != 9) {
      throw ParseError(
          line_no, "expected 9 fields, got " + std::to_string(fields.size()));
    }
    Record r;
    r.line = line_no;
    r.function_id = Trim(fields[0]);
    r.entry.point.sm_partition =
        ParseNumber(fields[1], line_no, "sm_partition");
    r.entry.point.quota = ParseNumber(fields[2], line_no, "quota");
    r.entry.throughput_rps = ParseNumber(fields[3], line_no, "throughput_rps");
    r.entry.p99_latency_ms = ParseNumber(fields[4], line_no, "p99_ms");
    r.slo_ms = ParseNumber(fields[5], line_no, "slo_ms");
    r.memory.noshare_mb = ParseNumber(fields[6], line_no, "mem_noshare_mb");
    r.memory.runtime_mb = ParseNumber(fields[7], line_no, "mem_runtime_mb");
    r.memory.server_mb = ParseNumber(fields[8], line_no, "mem_server_mb");
    ValidateRecord(r);
    records.push_back(std::move(r));
  }
  return records;
}

double JsonNumber(const nlohmann::json& obj, const char* key,
                  std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(line, std::string("missing field '") + key + "'");
  }
  if (!it->is_number()) {
    throw ParseError(line, std::string("field '") + key + "' is not a number");
  }
  return it->get<double>();
}

std::vector<Record> ReadJsonl(std::istream& in, std::size_t first_line_no,
                              const std::string& first_line) {
  std::vector<Record> records;
  std::string line = first_line;
  std::size_t line_no = first_line_no;
  bool have_line = true;
  while (have_line) {
    if (!Trim(line).empty()) {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object()) throw ParseError(line_no, "expected JSON object");
      Record r;
      r.line = line_no;
      auto id = obj.find("function_id");
      if (id == obj.end() || !id->is_string()) {
        throw ParseError(line_no, "missing string field 'function_id'");
      }
      r.function_id = id->get<std::string>();
      r.entry.point.sm_partition = JsonNumber(obj, "sm_partition", line_no);
      r.entry.point.quota = JsonNumber(obj, "quota", line_no);
      r.entry.throughput_rps = JsonNumber(obj, "throughput_rps", line_no);
      r.entry.p99_latency_ms = JsonNumber(obj, "p99_ms", line_no);
      r.slo_ms = JsonNumber(obj, "slo_ms", line_no);
      r.memory.noshare_mb = JsonNumber(obj, "mem_noshare_mb", line_no);
      r.memory.runtime_mb = JsonNumber(obj, "mem_runtime_mb", line_no);
      r.memory.server_mb = JsonNumber(obj, "mem_server_mb", line_no);
      ValidateRecord(r);
      records.push_back(std::move(r));
    }
    have_line = static_cast<bool>(std::getline(in, line));
    ++line_no;
  }
  return records;
}

}  // namespace

FunctionProfile::FunctionProfile(FunctionId function_id, double slo_latency_ms,
                                 MemorySpec memory,
                                 std::vector<ProfileEntry> entries)
    : function_id_(std::move(function_id)),
      slo_latency_ms_(slo_latency_ms),
      memory_(memory),
      entries_(std::move(entries)) {
  if (function_id_.empty()) {
    throw Error(ErrorCode::kValidation, "function_id must not be empty");
  }
  if (!(slo_latency_ms_ > 0.0)) {
    throw Error(ErrorCode::kValidation, "slo_latency_ms must be positive");
  }
  memory_.Validate();
  for (const auto& e : entries_) {
    e.point.Validate();
    if (!std::isfinite(e.throughput_rps) || e.throughput_rps < 0.0) {
      throw Error(ErrorCode::kValidation,
                  "throughput must be finite and non-negative at " +
                      e.point.ToString());
    }
    if (!(e.p99_latency_ms > 0.0)) {
      throw Error(ErrorCode::kValidation,
                  "p99 latency must be positive at " + e.point.ToString());
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const ProfileEntry& a, const ProfileEntry& b) {
              return a.point < b.point;
            });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].point == entries_[i - 1].point) {
      throw Error(ErrorCode::kConflict, "duplicate configuration " +
                                            entries_[i].point.ToString() +
                                            " for " + function_id_);
    }
  }
}

bool FunctionProfile::Contains(const ConfigPoint& point) const {
  return std::binary_search(entries_.begin(), entries_.end(),
                            ProfileEntry{point, 0.0, 0.0},
                            [](const ProfileEntry& a, const ProfileEntry& b) {
                              return a.point < b.point;
                            });
}

const ProfileEntry& FunctionProfile::At(const ConfigPoint& point) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), point,
      [](const ProfileEntry& e, const ConfigPoint& p) { return e.point < p; });
  if (it == entries_.end() || it->point != point) {
    throw Error(
        ErrorCode::kMissingConfiguration,
        function_id_ + " has no profiled configuration " + point.ToString());
  }
  return *it;
}

std::vector<std::string> FunctionProfile::MonotonicityWarnings() const {
  std::vector<std::string> warnings;
  // entries_ is sorted by (sm, quota): consecutive entries with equal SM walk
  // the quota axis.
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const auto& lo = entries_[i - 1];
    const auto& hi = entries_[i];
    if (lo.point.sm_partition == hi.point.sm_partition &&
        hi.throughput_rps < lo.throughput_rps) {
      std::ostringstream os;
      os << function_id_ << ": throughput drops along quota at SM "
         << lo.point.sm_partition << "%: T" << lo.point.ToString() << "="
         << lo.throughput_rps << " > T" << hi.point.ToString() << "="
         << hi.throughput_rps;
      warnings.push_back(os.str());
    }
  }
  std::vector<ProfileEntry> by_quota = entries_;
  std::sort(by_quota.begin(), by_quota.end(),
            [](const ProfileEntry& a, const ProfileEntry& b) {
              if (a.point.quota != b.point.quota) {
                return a.point.quota < b.point.quota;
              }
              return a.point.sm_partition < b.point.sm_partition;
            });
  for (std::size_t i = 1; i < by_quota.size(); ++i) {
    const auto& lo = by_quota[i - 1];
    const auto& hi = by_quota[i];
    if (lo.point.quota == hi.point.quota &&
        hi.throughput_rps < lo.throughput_rps) {
      std::ostringstream os;
      os << function_id_ << ": throughput drops along SM at quota "
         << lo.point.quota << ": T" << lo.point.ToString() << "="
         << lo.throughput_rps << " > T" << hi.point.ToString() << "="
         << hi.throughput_rps;
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

double ThroughputAt(const FunctionProfile& profile, const ConfigPoint& point) {
  return profile.At(point).throughput_rps;
}

double Rpr(double throughput_rps, const ConfigPoint& point) {
  return throughput_rps / point.SecondCores();
}

double Rpr(const FunctionProfile& profile, const ConfigPoint& point) {
  return Rpr(ThroughputAt(profile, point), point);
}

double FullQuotaRate(const FunctionProfile& profile, const ConfigPoint& point) {
  const ConfigPoint full{point.sm_partition, 1.0};
  if (profile.Contains(full)) return ThroughputAt(profile, full);
  return ThroughputAt(profile, point) / point.quota;
}

std::vector<ConfigPoint> MakeGrid(std::span<const double> sm_partitions,
                                  std::span<const double> quotas) {
  std::vector<ConfigPoint> grid;
  grid.reserve(sm_partitions.size() * quotas.size());
  for (double sm : sm_partitions) {
    for (double q : quotas) grid.push_back(ConfigPoint{sm, q});
  }
  return grid;
}

std::vector<ConfigPoint> DefaultProfilerGrid() {
  static constexpr double kSm[] = {6, 12, 24, 50, 60, 80, 100};
  static constexpr double kQuota[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  return MakeGrid(kSm, kQuota);
}

FunctionProfile SynthProfile(const FunctionId& function_id, double t_max,
                             double sm_knee, std::span<const ConfigPoint> grid,
                             const SynthOptions& options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::kValidation, "t_max must be positive");
  }
  if (!(sm_knee > 0.0 && sm_knee <= 100.0)) {
    throw Error(ErrorCode::kValidation, "sm_knee must be in (0, 100]");
  }
  if (grid.empty()) {
    throw Error(ErrorCode::kEmptyInput, "synthetic profile grid is empty");
  }
  std::vector<ProfileEntry> entries;
  entries.reserve(grid.size());
  for (const auto& point : grid) {
    point.Validate();
    const double spatial = std::min(point.sm_partition, sm_knee) / sm_knee;
    const double full_rate = t_max * spatial;
    entries.push_back(
        ProfileEntry{point, point.quota * full_rate, 1000.0 / full_rate});
  }
  return FunctionProfile(function_id, options.slo_latency_ms, options.memory,
                         std::move(entries));
}

IngestResult IngestProfiles(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorCode::kEmptyInput, "profile stream is empty");

  std::vector<Record> records = Trim(line).front() == '{'
                                    ? ReadJsonl(in, line_no, line)
                                    : ReadCsv(in, line_no, line);
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "profile stream has no records");
  }

  // Group by function, preserving first-appearance order.
  std::vector<FunctionId> order;
  std::map<FunctionId, std::vector<const Record*>> grouped;
  for (const auto& r : records) {
    auto& group = grouped[r.function_id];
    if (group.empty()) order.push_back(r.function_id);
    group.push_back(&r);
  }

  IngestResult result;
  for (const auto& id : order) {
    const auto& group = grouped[id];
    const Record& head = *group.front();
    std::vector<ProfileEntry> entries;
    std::map<ConfigPoint, std::size_t> seen;
    for (const Record* r : group) {
      if (r->slo_ms != head.slo_ms || !(r->memory == head.memory)) {
        throw Error(ErrorCode::kConflict,
                    "line " + std::to_string(r->line) + ": " + id +
                        " disagrees with line " + std::to_string(head.line) +
                        " on SLO or memory fields");
      }
      auto [it, inserted] = seen.emplace(r->entry.point, r->line);
      if (!inserted) {
        throw Error(ErrorCode::kConflict,
                    "line " + std::to_string(r->line) + ": duplicate point " +
                        r->entry.point.ToString() + " for " + id +
                        " (first at line " + std::to_string(it->second) + ")");
      }
      entries.push_back(r->entry);
    }
    FunctionProfile profile(id, head.slo_ms, head.memory, std::move(entries));
    auto warnings = profile.MonotonicityWarnings();
    result.warnings.insert(result.warnings.end(), warnings.begin(),
                           warnings.end());
    result.profiles.push_back(std::move(profile));
  }
  return result;
}

IngestResult LoadProfiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open '" + path + "'");
  return IngestProfiles(in);
}

FunctionProfile IngestProfile(std::istream& in) {
  auto result = IngestProfiles(in);
  if (result.profiles.size() != 1) {
    throw Error(ErrorCode::kValidation,
                "expected exactly one function, found " +
                    std::to_string(result.profiles.size()));
  }
  return std::move(result.profiles.front());
}

std::string FormatShortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string SerializeProfilesCsv(std::span<const FunctionProfile> profiles) {
  std::string out = kProfileCsvHeader;
  out.push_back('\n');
  for (const auto& p : profiles) {
    const std::string tail = "," + FormatShortest(p.slo_latency_ms()) + "," +
                             FormatShortest(p.memory().noshare_mb) + "," +
                             FormatShortest(p.memory().runtime_mb) + "," +
                             FormatShortest(p.memory().server_mb) + "\n";
    for (const auto& e : p.entries()) {
      out += p.function_id();
      out += "," + FormatShortest(e.point.sm_partition);
      out += "," + FormatShortest(e.point.quota);
      out += "," + FormatShortest(e.throughput_rps);
      out += "," + FormatShortest(e.p99_latency_ms);
      out += tail;
    }
  }
  return out;
}

std::string SerializeProfilesJsonl(std::span<const FunctionProfile> profiles) {
  // Hand-rolled so that numbers keep their shortest form and key order is
  // fixed.
  std::string out;
  for (const auto& p : profiles) {
    const std::string id = nlohmann::json(p.function_id()).dump();
    for (const auto& e : p.entries()) {
      out += "{\"function_id\":" + id;
      out += ",\"sm_partition\":" + FormatShortest(e.point.sm_partition);
      out += ",\"quota\":" + FormatShortest(e.point.quota);
      out += ",\"throughput_rps\":" + FormatShortest(e.throughput_rps);
      out += ",\"p99_ms\":" + FormatShortest(e.p99_latency_ms);
      out += ",\"slo_ms\":" + FormatShortest(p.slo_latency_ms());
      out += ",\"mem_noshare_mb\":" + FormatShortest(p.memory().noshare_mb);
      out += ",\"mem_runtime_mb\":" + FormatShortest(p.memory().runtime_mb);
      out += ",\"mem_server_mb\":" + FormatShortest(p.memory().server_mb);
      out += "}\n";
    }
  }
  return out;
}

}  // namespace gshare
