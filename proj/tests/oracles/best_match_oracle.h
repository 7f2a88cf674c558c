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

// Exhaustive best-area-fit search: enumerates every (gpu, free rect) pair.

#ifndef GSHARE_TESTS_ORACLES_BEST_MATCH_ORACLE_H_
#define GSHARE_TESTS_ORACLES_BEST_MATCH_ORACLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>

#include "gshare/packer.h"

namespace gshare_test {

struct OracleMatch {
  std::size_t node_index;
  gshare::Rect rect;
  std::int64_t diff;
};

inline std::optional<OracleMatch> ExhaustiveBestMatch(
    std::span<const gshare::GpuNode> nodes, const gshare::PodRequest& req,
    const gshare::MemoryAdmission& admission = {}) {
  std::optional<OracleMatch> best;
  std::tuple<std::int64_t, int, int, int> best_key;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (!admission.Admits(nodes[n], req.function_id)) continue;
    for (const auto& r : nodes[n].free_rects()) {
      if (r.w < req.w || r.h < req.h) continue;
      const std::int64_t diff = static_cast<std::int64_t>(r.w) * r.h -
                                static_cast<std::int64_t>(req.w) * req.h;
      const auto key = std::make_tuple(diff, nodes[n].gpu_id(), r.y, r.x);
      if (!best || key < best_key) {
        best = OracleMatch{n, r, diff};
        best_key = key;
      }
    }
  }
  return best;
}

}  // namespace gshare_test

#endif  // GSHARE_TESTS_ORACLES_BEST_MATCH_ORACLE_H_
