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

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "gshare/token_backend.h"

namespace gshare {
namespace {

// One full window: filter, enqueue, dispatch and complete until every pod
// has used its quota limit.
void BM_DispatchWindow(benchmark::State& state) {
  const int pods = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pct(5, 60);
  BackendTable table(BackendOptions{1000, 0.02});
  for (int i = 0; i < pods; ++i) {
    const double q = pct(rng) / 100.0;
    table.RegisterPod("pod" + std::to_string(i),
                      ResourceConfig{static_cast<double>(pct(rng)), q, q, 0});
  }
  std::int64_t tokens = 0;
  for (auto _ : state) {
    table.ResetWindow();
    for (int round = 0; round < 1000; ++round) {
      const FilterResult f = table.Filter();
      if (f.candidates.empty()) break;
      const auto issued = table.Dispatch(table.Enqueue(f.candidates), 0.0);
      tokens += static_cast<std::int64_t>(issued.size());
      for (const auto& t : issued) table.CompleteToken(t.id, t.duration);
    }
  }
  state.SetItemsProcessed(tokens);
}
BENCHMARK(BM_DispatchWindow)->DenseRange(2, 12, 2);

}  // namespace
}  // namespace gshare

BENCHMARK_MAIN();
