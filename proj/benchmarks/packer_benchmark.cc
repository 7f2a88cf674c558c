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
#include "gshare/packer.h"

namespace gshare {
namespace {

std::vector<PodRequest> RandomRequests(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(5, 60);
  std::vector<PodRequest> reqs;
  reqs.reserve(count);
  for (int i = 0; i < count; ++i) {
    reqs.push_back({"pod" + std::to_string(i), "f", side(rng), side(rng)});
  }
  return reqs;
}

// Place-until-full on a growing set of GPUs, then release everything.
void BM_PlaceRelease(benchmark::State& state) {
  const auto reqs = RandomRequests(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    std::vector<GpuNode> nodes;
    for (const auto& req : reqs) {
      auto match = BestMatch(nodes, req);
      if (!match) {
        nodes.emplace_back(static_cast<int>(nodes.size()));
        match = BestMatch(nodes, req);
      }
      nodes[match->node_index].Place(match->rect, req);
    }
    for (auto& node : nodes) {
      std::vector<PodId> ids;
      for (const auto& [id, p] : node.placements()) ids.push_back(id);
      for (const auto& id : ids) node.Release(id);
    }
    benchmark::DoNotOptimize(nodes.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PlaceRelease)->RangeMultiplier(4)->Range(16, 1024);

// BestMatch over a fleet of fragmented GPUs.
void BM_BestMatch(benchmark::State& state) {
  std::vector<GpuNode> nodes;
  for (const auto& req : RandomRequests(static_cast<int>(state.range(0)), 2)) {
    auto match = BestMatch(nodes, req);
    if (!match) {
      nodes.emplace_back(static_cast<int>(nodes.size()));
      match = BestMatch(nodes, req);
    }
    nodes[match->node_index].Place(match->rect, req);
  }
  const PodRequest probe{"probe", "f", 12, 40};
  for (auto _ : state) {
    benchmark::DoNotOptimize(BestMatch(nodes, probe));
  }
  state.counters["gpus"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_BestMatch)->RangeMultiplier(4)->Range(16, 1024);

// Release half the pods and rebuild the free list.
void BM_Restructure(benchmark::State& state) {
  GpuNode base(0);
  for (const auto& req : RandomRequests(64, 3)) {
    const auto match = BestMatch(std::span<const GpuNode>(&base, 1), req);
    if (match) base.Place(match->rect, req);
  }
  std::vector<PodId> ids;
  for (const auto& [id, p] : base.placements()) ids.push_back(id);
  for (std::size_t i = 0; i < ids.size(); i += 2) base.Release(ids[i]);
  for (auto _ : state) {
    GpuNode node = base;
    benchmark::DoNotOptimize(node.Restructure(0));
  }
  state.counters["free_rects"] = static_cast<double>(base.free_rects().size());
}
BENCHMARK(BM_Restructure);

}  // namespace
}  // namespace gshare

BENCHMARK_MAIN();
