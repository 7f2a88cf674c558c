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

#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace gshare {
namespace {

MetricsReport Sample() {
  MetricsReport r;
  for (int w = 0; w < 2; ++w) {
    r.function_windows.push_back({w, "f", 10, 9, 1, 0, 1 + w, 2});
    r.function_windows.push_back({w, "g", 4, 4, 0, 0, 0, 1});
    r.gpu_windows.push_back({w, 0, 3, 0.5, 0.25, 9282, 0.125});
    r.cluster_windows.push_back({w, 1, w, 0.125});
  }
  r.summary.policy = Policy::kTimeSharing;
  r.summary.windows = 2;
  r.summary.gpus_used = 1;
  r.summary.mean_utilization = 0.5;
  r.summary.slo_violation_pct = 100.0 / 9.0;
  r.summary.functions.push_back({"f", 20, 18, 2, 0, 2, 100.0 / 9.0, 2});
  return r;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(MetricsCsvTest, RowsPerWindowInEntityOrder) {
  const auto lines = Lines(MetricsCsv(Sample()));
  ASSERT_EQ(lines.size(), 1u + 2 * 4);
  EXPECT_EQ(lines[0], kMetricsCsvHeader);
  EXPECT_EQ(lines[1], "0,function,f,10,9,1,0,1,2,,,,,,");
  EXPECT_EQ(lines[2], "0,function,g,4,4,0,0,0,1,,,,,,");
  EXPECT_EQ(lines[3],
            "0,gpu,0,,,,,,3,0.500000,0.250000,9282.000000,0.125000,,");
  EXPECT_EQ(lines[4], "0,cluster,all,,,,,,,,,,0.125000,1,0");
  EXPECT_EQ(lines[8], "1,cluster,all,,,,,,,,,,0.125000,1,1");
}

TEST(MetricsCsvTest, EveryRowHasHeaderArity) {
  const std::string header = kMetricsCsvHeader;
  const auto columns = std::count(header.begin(), header.end(), ',');
  for (const auto& line : Lines(MetricsCsv(Sample()))) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns) << line;
  }
}

TEST(SummaryJsonTest, VersionedAndComplete) {
  const auto j = nlohmann::json::parse(SummaryJson(Sample().summary));
  EXPECT_EQ(j["schema_version"], kMetricsSchemaVersion);
  EXPECT_EQ(j["policy"], "timeshare");
  EXPECT_EQ(j["gpus_used"], 1);
  EXPECT_DOUBLE_EQ(j["slo_violation_pct"].get<double>(), 100.0 / 9.0);
  ASSERT_EQ(j["functions"].size(), 1u);
  EXPECT_EQ(j["functions"][0]["function_id"], "f");
  EXPECT_EQ(j["functions"][0]["final_queue_depth"], 2);
}

TEST(RequestTimingTest, LatencyDecomposition) {
  const RequestTiming t{"f", 1.0, 1.04, 1.05};
  EXPECT_NEAR(t.QueueingMs(), 40.0, 1e-9);
  EXPECT_NEAR(LatencyOf(t), 50.0, 1e-9);
  EXPECT_STREQ(PolicyName(Policy::kSpatioTemporal), "fast");
}

}  // namespace
}  // namespace gshare
