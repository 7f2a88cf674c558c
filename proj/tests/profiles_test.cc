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

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gshare/errors.h"

namespace gshare {
namespace {

const std::string kDataDir = GSHARE_DATA_DIR;

std::string Csv(const std::vector<std::string>& rows) {
  std::string out = std::string(kProfileCsvHeader) + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

FunctionProfile TwoPoint() {
  return FunctionProfile("f", 100, MemorySpec{1525, 1427, 400},
                         {{{12, 0.4}, 10, 50}, {{24, 0.4}, 15, 40}});
}

TEST(IngestTest, ResNetGridHas35Entries) {
  const IngestResult r = LoadProfiles(kDataDir + "/profiles/resnet.csv");
  ASSERT_EQ(r.profiles.size(), 1u);
  EXPECT_EQ(r.profiles[0].function_id(), "resnet");
  EXPECT_EQ(r.profiles[0].size(), 35u);
  EXPECT_TRUE(r.warnings.empty());
  for (const auto& point : DefaultProfilerGrid()) {
    EXPECT_TRUE(r.profiles[0].Contains(point)) << point.ToString();
  }
}

TEST(IngestTest, EmptyStreamIsEmptyInput) {
  std::istringstream in("\n  \n");
  try {
    IngestProfiles(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  std::istringstream header_only(Csv({}));
  EXPECT_THROW(IngestProfiles(header_only), Error);
}

TEST(IngestTest, DuplicatePointIsConflict) {
  std::istringstream in(Csv({"f,12,0.4,10,50,100,1525,1427,400",
                             "f,12,0.4,11,50,100,1525,1427,400"}));
  try {
    IngestProfiles(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
}

TEST(IngestTest, InconsistentSloAcrossRowsIsConflict) {
  std::istringstream in(Csv(
      {"f,12,0.4,10,50,100,1525,1427,400", "f,24,0.4,15,50,90,1525,1427,400"}));
  try {
    IngestProfiles(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
}

TEST(IngestTest, ParseErrorsCarryLineNumbers) {
  std::istringstream bad_number(Csv({"f,12,0.4,10,50,100,1525,1427,400",
                                     "f,24,abc,15,50,100,1525,1427,400"}));
  try {
    IngestProfiles(bad_number);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream short_row(Csv({"f,12,0.4"}));
  try {
    IngestProfiles(short_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream out_of_range(Csv({"f,120,0.4,10,50,100,1525,1427,400"}));
  try {
    IngestProfiles(out_of_range);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(IngestTest, JsonLinesFormat) {
  std::istringstream in(
      R"({"function_id":"g","sm_partition":12,"quota":0.4,"throughput_rps":10,"p99_ms":50,"slo_ms":100,"mem_noshare_mb":1,"mem_runtime_mb":1,"mem_server_mb":300})"
      "\n"
      R"({"function_id":"g","sm_partition":24,"quota":0.4,"throughput_rps":15,"p99_ms":40,"slo_ms":100,"mem_noshare_mb":1,"mem_runtime_mb":1,"mem_server_mb":300})"
      "\n");
  const FunctionProfile p = IngestProfile(in);
  EXPECT_EQ(p.function_id(), "g");
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(ThroughputAt(p, {24, 0.4}), 15);

  std::istringstream broken("{\"function_id\": \"g\"\n");
  try {
    IngestProfiles(broken);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(IngestTest, QuotaDipIsWarningNotError) {
  const IngestResult r = LoadProfiles(kDataDir + "/profiles/resnet_dip.csv");
  ASSERT_EQ(r.profiles.size(), 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("along quota"), std::string::npos);
}

TEST(IngestTest, MissingFileIsNotFound) {
  try {
    LoadProfiles(kDataDir + "/profiles/does_not_exist.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ProfileTest, LookupIsExactAndOffGridIsMissing) {
  const FunctionProfile p = TwoPoint();
  EXPECT_EQ(ThroughputAt(p, {12, 0.4}), 10);
  try {
    ThroughputAt(p, {13, 0.4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingConfiguration);
  }
}

TEST(ProfileTest, EntriesAreSortedByPoint) {
  const FunctionProfile p(
      "f", 100, MemorySpec{1525, 1427, 400},
      {{{24, 0.4}, 15, 40}, {{12, 1.0}, 30, 20}, {{12, 0.4}, 10, 50}});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.entries()[0].point, (ConfigPoint{12, 0.4}));
  EXPECT_EQ(p.entries()[1].point, (ConfigPoint{12, 1.0}));
  EXPECT_EQ(p.entries()[2].point, (ConfigPoint{24, 0.4}));
}

TEST(RprTest, HandEvaluatedValues) {
  EXPECT_NEAR(Rpr(10, {12, 0.4}), 208.3333333333, 1e-9);
  EXPECT_DOUBLE_EQ(Rpr(15, {24, 0.4}), 156.25);
  EXPECT_EQ(Rpr(0, {50, 0.6}), 0.0);
  EXPECT_NEAR(Rpr(TwoPoint(), {12, 0.4}), 208.3333333333, 1e-9);
}

TEST(RprTest, LinearInThroughput) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> t(0.0, 500.0);
  std::uniform_real_distribution<double> k(0.01, 100.0);
  std::uniform_int_distribution<int> sm(1, 100);
  std::uniform_int_distribution<int> q(1, 100);
  for (int i = 0; i < 1000; ++i) {
    const ConfigPoint p{static_cast<double>(sm(rng)), q(rng) / 100.0};
    const double tv = t(rng);
    const double kv = k(rng);
    EXPECT_NEAR(Rpr(kv * tv, p), kv * Rpr(tv, p),
                1e-9 * kv * Rpr(tv, p) + 1e-12);
  }
}

TEST(SynthProfileTest, KneeFormula) {
  const std::vector<ConfigPoint> grid = {{24, 1.0}, {12, 0.5}, {80, 0.2}};
  const FunctionProfile p = SynthProfile("s", 100, 24, grid);
  EXPECT_DOUBLE_EQ(ThroughputAt(p, {24, 1.0}), 100);
  EXPECT_DOUBLE_EQ(ThroughputAt(p, {12, 0.5}), 25);
  EXPECT_DOUBLE_EQ(ThroughputAt(p, {80, 0.2}), 20);
}

TEST(SynthProfileTest, RejectsBadParameters) {
  const auto grid = DefaultProfilerGrid();
  EXPECT_THROW(SynthProfile("s", 0, 24, grid), Error);
  EXPECT_THROW(SynthProfile("s", 100, 0, grid), Error);
  EXPECT_THROW(SynthProfile("s", 100, 24, {}), Error);
}

TEST(SynthProfileTest, MonotoneOnRandomGrids) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_int_distribution<int> sm(1, 100);
  std::uniform_int_distribution<int> q(1, 100);
  std::uniform_real_distribution<double> t_max(1, 1000);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> sms;
    std::vector<double> qs;
    for (int j = count(rng); j > 0; --j) sms.push_back(sm(rng));
    for (int j = count(rng); j > 0; --j) qs.push_back(q(rng) / 100.0);
    std::sort(sms.begin(), sms.end());
    sms.erase(std::unique(sms.begin(), sms.end()), sms.end());
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    const FunctionProfile p =
        SynthProfile("s", t_max(rng), sm(rng), MakeGrid(sms, qs));
    EXPECT_TRUE(p.MonotonicityWarnings().empty());
  }
}

TEST(SerializeTest, CsvAndJsonlRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 300.0);
  std::vector<FunctionProfile> profiles;
  for (const std::string id : {"a", "b"}) {
    std::vector<ProfileEntry> entries;
    for (const auto& point : DefaultProfilerGrid()) {
      entries.push_back({point, t(rng), 1.0 + t(rng)});
    }
    profiles.emplace_back(id, 69.5, MemorySpec{1525, 1427.25, 400}, entries);
  }
  for (const std::string& text :
       {SerializeProfilesCsv(profiles), SerializeProfilesJsonl(profiles)}) {
    std::istringstream in(text);
    const IngestResult r = IngestProfiles(in);
    ASSERT_EQ(r.profiles.size(), profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      EXPECT_EQ(r.profiles[i], profiles[i]);
    }
  }
}

TEST(FullQuotaRateTest, PrefersMeasuredFullQuotaPoint) {
  const FunctionProfile p(
      "f", 100, MemorySpec{1525, 1427, 400},
      {{{12, 0.4}, 10, 50}, {{12, 1.0}, 30, 20}, {{24, 0.5}, 20, 30}});
  EXPECT_EQ(FullQuotaRate(p, {12, 0.4}), 30);
  EXPECT_DOUBLE_EQ(FullQuotaRate(p, {24, 0.5}), 40);
}

}  // namespace
}  // namespace gshare
