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

// Randomized place/release/restructure sequences checked against the raster
// and exhaustive best-match oracles.

#ifndef GSHARE_TESTS_ORACLES_PACKER_PROPERTIES_H_
#define GSHARE_TESTS_ORACLES_PACKER_PROPERTIES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gshare/packer.h"
#include "oracles/best_match_oracle.h"
#include "oracles/raster_oracle.h"

namespace gshare_test {

struct PackerReport {
  std::int64_t sequences = 0;
  std::int64_t events = 0;
  std::int64_t placements = 0;
  std::int64_t infeasible = 0;
  std::int64_t releases = 0;
  std::int64_t restructures = 0;
  std::int64_t coverage_failures = 0;
  std::int64_t containment_failures = 0;
  std::int64_t best_match_failures = 0;
  std::vector<std::string> messages;

  bool ok() const {
    return coverage_failures == 0 && containment_failures == 0 &&
           best_match_failures == 0;
  }
};

inline PackerReport RunPackerSequences(int sequences, int max_events,
                                       std::uint64_t seed) {
  PackerReport report;
  std::mt19937_64 rng(seed);
  auto note = [&report](const std::string& m) {
    if (report.messages.size() < 8) report.messages.push_back(m);
  };
  const gshare::MemoryCatalog catalog = {
      {"small", {1000, 900, 400}},
      {"large", {6000, 3000, 3300}},
  };

  for (int s = 0; s < sequences; ++s) {
    ++report.sequences;
    const int gpus = 1 + static_cast<int>(rng() % 5);
    std::vector<gshare::GpuNode> nodes;
    for (int g = 0; g < gpus; ++g) nodes.emplace_back(g);
    const gshare::MemoryAdmission admission{
        rng() % 2 ? &catalog : nullptr, rng() % 2
                                            ? gshare::SharingMode::kShare
                                            : gshare::SharingMode::kNoShare};
    std::vector<std::pair<std::string, std::size_t>> live;
    const int events = 1 + static_cast<int>(rng() % max_events);
    for (int e = 0; e < events; ++e) {
      ++report.events;
      const auto roll = rng() % 10;
      if (roll < 6 || live.empty()) {
        gshare::PodRequest req;
        req.pod_id = "s" + std::to_string(s) + "e" + std::to_string(e);
        req.function_id = rng() % 3 == 0 ? "large" : "small";
        // Mix of grid-like and arbitrary integer sizes.
        static constexpr int kGrid[] = {6, 12, 20, 24, 40, 50, 60, 80, 100};
        req.w =
            rng() % 2 ? kGrid[rng() % 9] : 1 + static_cast<int>(rng() % 100);
        req.h =
            rng() % 2 ? kGrid[rng() % 9] : 1 + static_cast<int>(rng() % 100);
        const auto got = gshare::BestMatch(nodes, req, admission);
        const auto want = ExhaustiveBestMatch(nodes, req, admission);
        const bool agree =
            got.has_value() == want.has_value() &&
            (!got || (got->node_index == want->node_index &&
                      got->rect == want->rect && got->area_diff == want->diff));
        if (!agree) {
          ++report.best_match_failures;
          note("best_match mismatch at sequence " + std::to_string(s) +
               " event " + std::to_string(e));
        }
        if (!got) {
          ++report.infeasible;
          continue;
        }
        nodes[got->node_index].Place(got->rect, req);
        live.emplace_back(req.pod_id, got->node_index);
        ++report.placements;
      } else if (roll < 9) {
        const std::size_t i = rng() % live.size();
        nodes[live[i].second].Release(live[i].first);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
        ++report.releases;
      } else {
        const std::size_t threshold = rng() % 8;
        for (auto& node : nodes) node.Restructure(threshold);
        ++report.restructures;
      }

      for (const auto& node : nodes) {
        const auto breaches = RasterBreaches(node);
        for (const auto& b : breaches) {
          if (b.find("nested") != std::string::npos) {
            ++report.containment_failures;
          } else {
            ++report.coverage_failures;
          }
          note("gpu " + std::to_string(node.gpu_id()) + " sequence " +
               std::to_string(s) + ": " + b);
        }
        const std::int64_t union_area = gshare::UnionArea(node.free_rects());
        if (union_area != RasterFreeCells(node)) {
          ++report.coverage_failures;
          note("union area disagrees with raster at sequence " +
               std::to_string(s));
        }
      }
    }
  }
  return report;
}

}  // namespace gshare_test

#endif  // GSHARE_TESTS_ORACLES_PACKER_PROPERTIES_H_
