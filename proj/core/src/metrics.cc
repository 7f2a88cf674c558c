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

#include "gshare/metrics.h"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <string>

namespace gshare {
namespace {

std::string Fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

const char* PolicyName(Policy policy) {
  return policy == Policy::kSpatioTemporal ? "fast" : "timeshare";
}

std::string MetricsCsv(const MetricsReport& report) {
  std::string out = kMetricsCsvHeader;
  out += "\n";
  std::size_t fi = 0;
  std::size_t gi = 0;
  for (const auto& c : report.cluster_windows) {
    for (; fi < report.function_windows.size() &&
           report.function_windows[fi].window == c.window;
         ++fi) {
      const auto& f = report.function_windows[fi];
      out += std::to_string(f.window) + ",function," + f.function_id + "," +
             std::to_string(f.arrivals) + "," + std::to_string(f.completions) +
             "," + std::to_string(f.slo_violations) + "," +
             std::to_string(f.dropped) + "," + std::to_string(f.queue_depth) +
             "," + std::to_string(f.pods) + ",,,,,,\n";
    }
    for (; gi < report.gpu_windows.size() &&
           report.gpu_windows[gi].window == c.window;
         ++gi) {
      const auto& g = report.gpu_windows[gi];
      out += std::to_string(g.window) + ",gpu," + std::to_string(g.gpu_id) +
             ",,,,,," + std::to_string(g.pods) + "," + Fixed(g.utilization) +
             "," + Fixed(g.sm_occupancy) + "," + Fixed(g.memory_mb) + "," +
             Fixed(g.fragmentation) + ",,\n";
    }
    out += std::to_string(c.window) + ",cluster,all,,,,,,,,,," +
           Fixed(c.fragmentation) + "," + std::to_string(c.gpus_in_use) + "," +
           std::to_string(c.placement_failures) + "\n";
  }
  return out;
}

std::string SummaryJson(const MetricsSummary& summary) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kMetricsSchemaVersion;
  doc["policy"] = PolicyName(summary.policy);
  doc["windows"] = summary.windows;
  doc["gpus_used"] = summary.gpus_used;
  doc["mean_utilization"] = summary.mean_utilization;
  doc["mean_sm_occupancy"] = summary.mean_sm_occupancy;
  doc["slo_violation_pct"] = summary.slo_violation_pct;
  doc["placement_failures"] = summary.placement_failures;
  auto& fns = doc["functions"] = nlohmann::ordered_json::array();
  for (const auto& f : summary.functions) {
    nlohmann::ordered_json entry;
    entry["function_id"] = f.function_id;
    entry["arrivals"] = f.arrivals;
    entry["completions"] = f.completions;
    entry["slo_violations"] = f.slo_violations;
    entry["dropped"] = f.dropped;
    entry["final_queue_depth"] = f.final_queue_depth;
    entry["slo_violation_pct"] = f.slo_violation_pct;
    entry["peak_pods"] = f.peak_pods;
    fns.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gshare
