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
#include <vector>

#include "benchmark/benchmark.h"
#include "gshare/autoscaler.h"
#include "gshare/profiles.h"

namespace gshare {
namespace {

FunctionProfile GridProfile() {
  return SynthProfile("f", 100, 24, DefaultProfilerGrid());
}

void BM_ScaleUp(benchmark::State& state) {
  const FunctionProfile profile = GridProfile();
  const double gap = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScaleUp(profile, gap));
  }
}
BENCHMARK(BM_ScaleUp)->RangeMultiplier(10)->Range(10, 10000);

// Scale down from a set sized for 2x the demand.
void BM_ScaleDown(benchmark::State& state) {
  const FunctionProfile profile = GridProfile();
  const double demand = static_cast<double>(state.range(0));
  RunningSet running("f");
  int i = 0;
  for (const auto& d : ScaleUp(profile, 2 * demand)) {
    running.Push({"pod" + std::to_string(i++), d.point, d.throughput_rps});
  }
  const DemandEstimate estimate{"f", demand};
  for (auto _ : state) {
    benchmark::DoNotOptimize(Autoscale(profile, running, estimate));
  }
  state.counters["pods"] = static_cast<double>(running.size());
}
BENCHMARK(BM_ScaleDown)->RangeMultiplier(10)->Range(10, 10000);

}  // namespace
}  // namespace gshare

BENCHMARK_MAIN();
