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

// gshare command-line tool.
//
//   gshare profile-check <profile.csv|jsonl>
//   gshare run --scenario <s.json> --out <dir> [--seed N] [--policy
//   fast|timeshare] [--verbose] gshare compare --scenario <s.json> [--out
//   <dir>] [--seed N] [--parallel] gshare pack-trace <trace.json>
//
// Exit codes: 0 success, 1 validation failure, 2 runtime invariant breach.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "gshare/errors.h"
#include "gshare/metrics.h"
#include "gshare/pack_trace.h"
#include "gshare/profiles.h"
#include "gshare/scenario.h"
#include "gshare/simulator.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("gshare");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GSHARE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour real names.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    }
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) {
    throw gshare::Error(gshare::ErrorCode::kValidation,
                        "cannot write '" + path.string() + "'");
  }
  spdlog::info("wrote {}", path.string());
}

void PrepareOutDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw gshare::Error(
        gshare::ErrorCode::kValidation,
        "cannot create output directory '" + dir.string() + "'");
  }
}

gshare::Scenario LoadWithSeed(const std::string& path,
                              std::optional<std::uint64_t> seed) {
  gshare::Scenario scenario = gshare::LoadScenario(path);
  if (seed) scenario.seed = *seed;
  scenario.Validate();
  spdlog::info("scenario {}: {} functions, {} GPUs, {} windows", path,
               scenario.functions.size(), scenario.fleet_size,
               scenario.windows);
  return scenario;
}

int ProfileCheck(const std::string& path) {
  const gshare::IngestResult result = gshare::LoadProfiles(path);
  std::size_t points = 0;
  for (const auto& p : result.profiles) points += p.entries().size();
  std::printf("%zu points, %zu warnings\n", points, result.warnings.size());
  for (const auto& w : result.warnings) std::printf("warning: %s\n", w.c_str());

  const auto grid = gshare::DefaultProfilerGrid();
  for (const auto& p : result.profiles) {
    std::size_t covered = 0;
    for (const auto& point : grid) covered += p.Contains(point) ? 1 : 0;
    std::printf(
        "\nfunction %s: %zu points, slo %.1f ms, grid coverage %zu/%zu\n",
        p.function_id().c_str(), p.entries().size(), p.slo_latency_ms(),
        covered, grid.size());
    std::printf("  %8s %8s %12s %12s %12s\n", "sm", "quota", "rps", "p99_ms",
                "rpr");
    for (const auto& e : p.entries()) {
      std::printf("  %8.1f %8.2f %12.3f %12.3f %12.3f\n", e.point.sm_partition,
                  e.point.quota, e.throughput_rps, e.p99_latency_ms,
                  gshare::Rpr(e.throughput_rps, e.point));
    }
  }
  return kExitOk;
}

void PrintHeadline(const gshare::MetricsSummary& s) {
  std::printf("policy: %s\n", gshare::PolicyName(s.policy));
  std::printf("gpus_used: %d\n", s.gpus_used);
  std::printf("mean_utilization: %.4f\n", s.mean_utilization);
  std::printf("mean_sm_occupancy: %.4f\n", s.mean_sm_occupancy);
  std::printf("slo_violation_pct: %.4f\n", s.slo_violation_pct);
  std::printf("placement_failures: %lld\n",
              static_cast<long long>(s.placement_failures));
}

int RunScenario(const std::string& scenario_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, const std::string& policy,
                bool verbose) {
  const gshare::Scenario scenario = LoadWithSeed(scenario_path, seed);
  const std::filesystem::path out(out_dir);
  PrepareOutDir(out);

  gshare::SimOptions options;
  options.policy = policy == "timeshare" ? gshare::Policy::kTimeSharing
                                         : gshare::Policy::kSpatioTemporal;
  std::ofstream debug;
  if (verbose) {
    debug.open(out / "debug.jsonl", std::ios::binary);
    options.debug = &debug;
  }
  const gshare::MetricsReport report = gshare::Run(scenario, options);
  WriteFile(out / "metrics.csv", gshare::MetricsCsv(report));
  WriteFile(out / "summary.json", gshare::SummaryJson(report.summary));
  PrintHeadline(report.summary);
  return kExitOk;
}

int Compare(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, bool parallel) {
  const gshare::Scenario scenario = LoadWithSeed(scenario_path, seed);
  gshare::PolicyComparison comparison;
  if (parallel) {
    // Each run owns its state; the scenario is shared read-only.
    auto run = [&scenario](gshare::Policy policy) {
      gshare::SimOptions options;
      options.policy = policy;
      return gshare::Run(scenario, options);
    };
    auto fast =
        std::async(std::launch::async, run, gshare::Policy::kSpatioTemporal);
    auto timeshare =
        std::async(std::launch::async, run, gshare::Policy::kTimeSharing);
    comparison.spatio_temporal = fast.get();
    comparison.time_sharing = timeshare.get();
  } else {
    comparison = gshare::ComparePolicies(scenario);
  }
  std::fputs(gshare::ComparisonTable(comparison).c_str(), stdout);
  if (!out_dir.empty()) {
    const std::filesystem::path out(out_dir);
    PrepareOutDir(out);
    for (const auto* report :
         {&comparison.spatio_temporal, &comparison.time_sharing}) {
      const std::string name = gshare::PolicyName(report->summary.policy);
      WriteFile(out / ("metrics_" + name + ".csv"),
                gshare::MetricsCsv(*report));
      WriteFile(out / ("summary_" + name + ".json"),
                gshare::SummaryJson(report->summary));
    }
  }
  return kExitOk;
}

int PackTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw gshare::Error(gshare::ErrorCode::kNotFound,
                        "cannot open '" + path + "'");
  }
  const gshare::PackTraceResult result =
      gshare::RunPackTrace(gshare::ParsePackTrace(in));
  for (const auto& line : result.lines) std::printf("%s\n", line.c_str());
  if (result.errors > 0 || result.infeasible > 0) {
    spdlog::warn("{} error events, {} infeasible placements", result.errors,
                 result.infeasible);
  }
  if (result.breaches > 0) {
    spdlog::error("{} invariant breaches", result.breaches);
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();

  CLI::App app{"gshare: spatio-temporal GPU sharing simulator"};
  app.require_subcommand(1);

  std::string profile_path;
  auto* check = app.add_subcommand(
      "profile-check", "Validate a profile file and print RPR tables");
  check->add_option("path", profile_path, "Profile CSV or JSON-lines file")
      ->required();

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string policy = "fast";
  bool verbose = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--policy", policy, "Sharing policy")
      ->check(CLI::IsMember({"fast", "timeshare"}));
  run->add_flag("--verbose", verbose,
                "Write per-window backend tables to debug.jsonl");

  bool parallel = false;
  auto* compare = app.add_subcommand(
      "compare", "Run spatio-temporal and time-sharing policies side by side");
  compare->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--seed", seed, "Seed override");
  compare->add_flag("--parallel", parallel, "Run both policies concurrently");

  std::string trace_path;
  auto* pack = app.add_subcommand("pack-trace",
                                  "Replay place/release events on the packer");
  pack->add_option("path", trace_path, "Trace JSON or JSON-lines")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*check) return ProfileCheck(profile_path);
    if (*run) return RunScenario(scenario_path, out_dir, seed, policy, verbose);
    if (*compare) return Compare(scenario_path, out_dir, seed, parallel);
    if (*pack) return PackTrace(trace_path);
  } catch (const gshare::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == gshare::ErrorCode::kInvariant ? kExitInvariant
                                                     : kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInvariant;
  }
  return kExitValidation;
}
