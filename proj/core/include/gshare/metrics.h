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

#ifndef GSHARE_METRICS_H_
#define GSHARE_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gshare/resource_config.h"

namespace gshare {

inline constexpr int kMetricsSchemaVersion = 1;

enum class Policy {
  // Profiles used as-is: pods get (SM share x quota) rectangles.
  kSpatioTemporal,
  // Every pod gets 100% of the SMs; packing degenerates to 1-D quota packing.
  kTimeSharing,
};

const char* PolicyName(Policy policy);

// Timing of one completed request, in simulated seconds.
struct RequestTiming {
  FunctionId function_id;
  double arrival_s = 0.0;
  double start_s = 0.0;
  double completion_s = 0.0;

  double QueueingMs() const { return (start_s - arrival_s) * 1000.0; }
  double LatencyMs() const { return (completion_s - arrival_s) * 1000.0; }
};

// End-to-end latency: queueing delay plus service time.
inline double LatencyOf(const RequestTiming& request) {
  return request.LatencyMs();
}

struct FunctionWindowMetrics {
  int window = 0;
  FunctionId function_id;
  std::int64_t arrivals = 0;
  std::int64_t completions = 0;
  std::int64_t slo_violations = 0;
  std::int64_t dropped = 0;
  // Waiting plus in-service requests at the end of the window.
  std::int64_t queue_depth = 0;
  int pods = 0;
};

struct GpuWindowMetrics {
  int window = 0;
  int gpu_id = 0;
  int pods = 0;
  // Fraction of the window during which any pod on the GPU was running.
  double utilization = 0.0;
  // Time-weighted sum of the active SM share of running pods, / 100.
  double sm_occupancy = 0.0;
  double memory_mb = 0.0;
  double fragmentation = 0.0;
};

struct ClusterWindowMetrics {
  int window = 0;
  int gpus_in_use = 0;
  // Cumulative.
  std::int64_t placement_failures = 0;
  // Mean over GPUs in use.
  double fragmentation = 0.0;
};

struct FunctionSummary {
  FunctionId function_id;
  std::int64_t arrivals = 0;
  std::int64_t completions = 0;
  std::int64_t slo_violations = 0;
  std::int64_t dropped = 0;
  std::int64_t final_queue_depth = 0;
  double slo_violation_pct = 0.0;
  int peak_pods = 0;
};

struct MetricsSummary {
  Policy policy = Policy::kSpatioTemporal;
  int windows = 0;
  int gpus_used = 0;
  double mean_utilization = 0.0;
  double mean_sm_occupancy = 0.0;
  double slo_violation_pct = 0.0;
  std::int64_t placement_failures = 0;
  std::vector<FunctionSummary> functions;
};

struct MetricsReport {
  std::vector<FunctionWindowMetrics> function_windows;
  std::vector<GpuWindowMetrics> gpu_windows;
  std::vector<ClusterWindowMetrics> cluster_windows;
  // Only filled when requested (SimOptions::record_requests).
  std::vector<RequestTiming> requests;
  MetricsSummary summary;
};

// One row per window per entity (function, GPU in use, cluster). Fixed
// column order and number formatting, so equal reports give equal bytes.
std::string MetricsCsv(const MetricsReport& report);
std::string SummaryJson(const MetricsSummary& summary);

inline constexpr const char* kMetricsCsvHeader =
    "window,entity,id,arrivals,completions,slo_violations,dropped,"
    "queue_depth,pods,utilization,sm_occupancy,memory_mb,fragmentation,"
    "gpus_in_use,placement_failures";

}  // namespace gshare

#endif  // GSHARE_METRICS_H_
