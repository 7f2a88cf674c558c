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

#include "gshare/scenario.h"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "gshare/errors.h"

namespace gshare {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kValidation, "scenario: " + message);
}

template <typename T>
T Get(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    Invalid(std::string("field '") + key + "' has the wrong type");
  }
}

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) Invalid(std::string("missing field '") + key + "'");
  return *it;
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

MemorySpec ParseMemory(const json& obj) {
  MemorySpec m;
  m.noshare_mb = Get<double>(obj, "noshare_mb", 0.0);
  m.runtime_mb = Get<double>(obj, "runtime_mb", 0.0);
  m.server_mb = Get<double>(obj, "server_mb", 0.0);
  return m;
}

std::vector<double> NumberList(const json& obj, const char* key) {
  const json& list = Require(obj, key);
  if (!list.is_array()) Invalid(std::string("'") + key + "' must be a list");
  std::vector<double> out;
  for (const auto& v : list) {
    if (!v.is_number()) Invalid(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

FunctionProfile ParseProfile(const json& fn, const std::string& function_id,
                             const std::string& base_dir) {
  const json& spec = Require(fn, "profile");
  if (!spec.is_object()) Invalid("'profile' must be an object");

  if (spec.contains("file")) {
    const std::string path =
        Resolve(base_dir, Get<std::string>(spec, "file", ""));
    const std::string wanted =
        Get<std::string>(spec, "function_id", function_id);
    auto loaded = LoadProfiles(path);
    for (auto& p : loaded.profiles) {
      if (p.function_id() == wanted) {
        if (wanted == function_id) return std::move(p);
        return FunctionProfile(function_id, p.slo_latency_ms(), p.memory(),
                               p.entries());
      }
    }
    Invalid("profile file '" + path + "' has no function '" + wanted + "'");
  }

  const double slo_ms = Get<double>(spec, "slo_ms", 0.0);
  const MemorySpec memory =
      spec.contains("memory") ? ParseMemory(spec["memory"]) : MemorySpec{};

  if (spec.contains("synthetic")) {
    const json& syn = spec["synthetic"];
    const auto sm = NumberList(syn, "sm");
    const auto quota = NumberList(syn, "quota");
    SynthOptions options;
    options.slo_latency_ms = slo_ms;
    options.memory = memory;
    return SynthProfile(function_id, Get<double>(syn, "t_max", 0.0),
                        Get<double>(syn, "sm_knee", 0.0), MakeGrid(sm, quota),
                        options);
  }

  if (spec.contains("entries")) {
    std::vector<ProfileEntry> entries;
    for (const auto& e : spec["entries"]) {
      ProfileEntry entry;
      entry.point.sm_partition = Get<double>(e, "sm_partition", 0.0);
      entry.point.quota = Get<double>(e, "quota", 0.0);
      entry.throughput_rps = Get<double>(e, "throughput_rps", -1.0);
      entry.p99_latency_ms = Get<double>(e, "p99_ms", 1.0);
      entries.push_back(entry);
    }
    return FunctionProfile(function_id, slo_ms, memory, std::move(entries));
  }
  Invalid("profile of '" + function_id +
          "' needs one of 'file', 'synthetic' or 'entries'");
}

WorkloadSpec ParseWorkload(const json& obj, const std::string& base_dir) {
  if (!obj.is_object()) Invalid("'workload' must be an object");
  WorkloadSpec w;
  const std::string type = Get<std::string>(obj, "type", "");
  w.poisson = Get<bool>(obj, "poisson", false);
  if (type == "counts") {
    w.kind = WorkloadKind::kCounts;
    w.counts = Get<std::vector<std::int64_t>>(obj, "counts", {});
  } else if (type == "constant") {
    w.kind = WorkloadKind::kConstant;
    w.rps = Get<double>(obj, "rps", -1.0);
  } else if (type == "step") {
    w.kind = WorkloadKind::kStep;
    w.rps = Get<double>(obj, "rps", -1.0);
    w.step_rps = Get<double>(obj, "step_rps", -1.0);
    w.step_window = Get<int>(obj, "step_window", -1);
  } else if (type == "sinusoid") {
    w.kind = WorkloadKind::kSinusoid;
    w.rps = Get<double>(obj, "rps", -1.0);
    w.amplitude_rps = Get<double>(obj, "amplitude_rps", 0.0);
    w.period_windows = Get<double>(obj, "period_windows", 0.0);
  } else if (type == "replay") {
    w.kind = WorkloadKind::kReplay;
    w.counts =
        LoadReplayCounts(Resolve(base_dir, Get<std::string>(obj, "file", "")));
  } else {
    Invalid("unknown workload type '" + type + "'");
  }
  w.Validate();
  return w;
}

}  // namespace

void Scenario::Validate() const {
  if (fleet_size < 1) Invalid("fleet_size must be >= 1");
  if (!(window_ms > 0.0)) Invalid("window_ms must be positive");
  if (epoch_windows < 1) Invalid("epoch_windows must be >= 1");
  if (windows < 0) Invalid("windows must be >= 0");
  if (cold_start_windows < 0) Invalid("cold_start_windows must be >= 0");
  if (!(quantum > 0.0 && quantum <= 1.0)) Invalid("quantum must be in (0, 1]");
  if (!(gpu_memory_mb > 0.0)) Invalid("gpu_memory_mb must be positive");
  if (predictor_windows < 1) Invalid("predictor_windows must be >= 1");
  std::set<FunctionId> ids;
  for (const auto& f : functions) {
    if (!ids.insert(f.profile.function_id()).second) {
      Invalid("duplicate function '" + f.profile.function_id() + "'");
    }
    if (f.profile.empty()) {
      Invalid("function '" + f.profile.function_id() +
              "' has an empty profile");
    }
    if (f.max_queue && *f.max_queue < 0) Invalid("max_queue must be >= 0");
    f.workload.Validate();
  }
}

Scenario ParseScenario(const std::string& json_text,
                       const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) Invalid("top level must be an object");
  const int version = Get<int>(doc, "schema_version", kScenarioSchemaVersion);
  if (version != kScenarioSchemaVersion) {
    Invalid("unsupported schema_version " + std::to_string(version));
  }

  Scenario s;
  s.fleet_size = Get<int>(doc, "fleet_size", s.fleet_size);
  s.window_ms = Get<double>(doc, "window_ms", s.window_ms);
  s.epoch_windows = Get<int>(doc, "epoch_windows", s.epoch_windows);
  s.windows = Get<int>(doc, "windows", s.windows);
  s.seed = Get<std::uint64_t>(doc, "seed", s.seed);
  s.cold_start_windows =
      Get<int>(doc, "cold_start_windows", s.cold_start_windows);
  s.quantum = Get<double>(doc, "quantum", s.quantum);
  s.restructure_threshold =
      Get<std::size_t>(doc, "restructure_threshold", s.restructure_threshold);
  s.gpu_memory_mb = Get<double>(doc, "gpu_memory_mb", s.gpu_memory_mb);
  s.sharing = Get<bool>(doc, "model_sharing", true) ? SharingMode::kShare
                                                    : SharingMode::kNoShare;
  s.backlog_drain = Get<bool>(doc, "backlog_drain", s.backlog_drain);
  s.predictor_windows = Get<int>(doc, "predictor_windows", s.predictor_windows);
  const std::string pattern = Get<std::string>(doc, "arrival_pattern", "even");
  if (pattern == "even") {
    s.arrival_pattern = ArrivalPattern::kEven;
  } else if (pattern == "uniform") {
    s.arrival_pattern = ArrivalPattern::kUniform;
  } else {
    Invalid("unknown arrival_pattern '" + pattern + "'");
  }

  const json& functions = Require(doc, "functions");
  if (!functions.is_array()) Invalid("'functions' must be a list");
  for (const auto& fn : functions) {
    if (!fn.is_object()) Invalid("each function must be an object");
    const std::string id = Get<std::string>(fn, "function_id", "");
    if (id.empty()) Invalid("function without 'function_id'");
    FunctionProfile profile = ParseProfile(fn, id, base_dir);
    if (fn.contains("slo_ms")) {
      profile = FunctionProfile(id, Get<double>(fn, "slo_ms", 0.0),
                                profile.memory(), profile.entries());
    }
    FunctionSpec spec{std::move(profile),
                      ParseWorkload(Require(fn, "workload"), base_dir),
                      std::nullopt};
    if (fn.contains("max_queue") && !fn["max_queue"].is_null()) {
      spec.max_queue = Get<std::int64_t>(fn, "max_queue", 0);
    }
    s.functions.push_back(std::move(spec));
  }
  s.Validate();
  return s;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return ParseScenario(buffer.str(), parent.empty() ? "." : parent.string());
}

}  // namespace gshare
