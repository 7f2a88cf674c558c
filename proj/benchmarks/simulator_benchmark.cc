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

#include <string>

#include "benchmark/benchmark.h"
#include "gshare/scenario.h"
#include "gshare/simulator.h"

namespace gshare {
namespace {

const std::string kScenarioDir = std::string(GSHARE_DATA_DIR) + "/scenarios/";

void RunScenario(benchmark::State& state, const std::string& name,
                 Policy policy) {
  const Scenario scenario = LoadScenario(kScenarioDir + name + ".json");
  SimOptions options;
  options.policy = policy;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Run(scenario, options));
  }
  state.SetItemsProcessed(state.iterations() * scenario.windows);
}

void BM_RunStep(benchmark::State& state) {
  RunScenario(state, "step", Policy::kSpatioTemporal);
}
BENCHMARK(BM_RunStep)->Unit(benchmark::kMillisecond);

void BM_RunConsolidation(benchmark::State& state) {
  RunScenario(state, "consolidation", Policy::kSpatioTemporal);
}
BENCHMARK(BM_RunConsolidation)->Unit(benchmark::kMillisecond);

void BM_RunConsolidationTimeSharing(benchmark::State& state) {
  RunScenario(state, "consolidation", Policy::kTimeSharing);
}
BENCHMARK(BM_RunConsolidationTimeSharing)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gshare

BENCHMARK_MAIN();
