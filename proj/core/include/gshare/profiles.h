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

#ifndef GSHARE_PROFILES_H_
#define GSHARE_PROFILES_H_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gshare/memory_model.h"
#include "gshare/resource_config.h"

namespace gshare {

struct ProfileEntry {
  ConfigPoint point;
  double throughput_rps = 0.0;
  double p99_latency_ms = 0.0;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

// Measured or synthetic throughput of one function over the configuration
// grid. Immutable once built; safe to share across threads.
class FunctionProfile {
 public:
  // Throws Error(kConflict) on duplicate points and Error(kValidation) on
  // out-of-range fields.
  FunctionProfile(FunctionId function_id, double slo_latency_ms,
                  MemorySpec memory, std::vector<ProfileEntry> entries);

  const FunctionId& function_id() const { return function_id_; }
  double slo_latency_ms() const { return slo_latency_ms_; }
  const MemorySpec& memory() const { return memory_; }

  // Entries ordered by (sm_partition, quota).
  const std::vector<ProfileEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool Contains(const ConfigPoint& point) const;
  // Throws Error(kMissingConfiguration) for points that were not profiled.
  const ProfileEntry& At(const ConfigPoint& point) const;

  // Human-readable notes for non-monotone measurements: throughput dropping
  // as quota grows at fixed SM, or as SM grows at fixed quota.
  std::vector<std::string> MonotonicityWarnings() const;

  friend bool operator==(const FunctionProfile&,
                         const FunctionProfile&) = default;

 private:
  FunctionId function_id_;
  double slo_latency_ms_;
  MemorySpec memory_;
  std::vector<ProfileEntry> entries_;
};

// Stored throughput at a profiled point; no interpolation.
double ThroughputAt(const FunctionProfile& profile, const ConfigPoint& point);

// RPS per resource: throughput / (SM fraction * quota).
double Rpr(double throughput_rps, const ConfigPoint& point);
double Rpr(const FunctionProfile& profile, const ConfigPoint& point);

// Full-quota service rate at the point's SM share. Uses the (S, 1.0) entry
// when profiled, otherwise extrapolates T(S,Q)/Q.
double FullQuotaRate(const FunctionProfile& profile, const ConfigPoint& point);

// Cartesian grid of SM percents and quota fractions.
std::vector<ConfigPoint> MakeGrid(std::span<const double> sm_partitions,
                                  std::span<const double> quotas);

// The profiler grid used for the MLPerf models: quotas {0.2,...,1.0} and SM
// shares {6,12,24,50,60,80,100}.
std::vector<ConfigPoint> DefaultProfilerGrid();

struct SynthOptions {
  double slo_latency_ms = 100.0;
  MemorySpec memory{1525.0, 1427.0, 400.0};
};

// T(S,Q) = Q * t_max * min(S, sm_knee) / sm_knee: proportional in quota and
// saturating at the SM knee. p99 is set to the full-quota service time.
FunctionProfile SynthProfile(const FunctionId& function_id, double t_max,
                             double sm_knee, std::span<const ConfigPoint> grid,
                             const SynthOptions& options = {});

struct IngestResult {
  std::vector<FunctionProfile> profiles;
  std::vector<std::string> warnings;
};

// Reads CSV (with the canonical header) or JSON-lines profile records. The
// format is detected from the first non-blank character. Rows of one function
// must agree on SLO and memory fields.
IngestResult IngestProfiles(std::istream& in);
IngestResult LoadProfiles(const std::string& path);

// Exactly one function is expected; throws Error(kValidation) otherwise.
FunctionProfile IngestProfile(std::istream& in);

inline constexpr const char* kProfileCsvHeader =
    "function_id,sm_partition,quota,throughput_rps,p99_ms,slo_ms,"
    "mem_noshare_mb,mem_runtime_mb,mem_server_mb";

// Canonical encodings. Numbers use the shortest round-trip representation,
// so IngestProfiles(Serialize*(p)) reproduces p bit for bit.
std::string SerializeProfilesCsv(std::span<const FunctionProfile> profiles);
std::string SerializeProfilesJsonl(std::span<const FunctionProfile> profiles);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatShortest(double value);

}  // namespace gshare

#endif  // GSHARE_PROFILES_H_
