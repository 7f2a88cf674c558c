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

#ifndef GSHARE_PACK_TRACE_H_
#define GSHARE_PACK_TRACE_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gshare/packer.h"

namespace gshare {

enum class PackOp { kPlace, kRelease, kRestructure };

struct PackEvent {
  PackOp op = PackOp::kPlace;
  PodId pod_id;
  FunctionId function_id;
  int w = 0;
  int h = 0;
  std::size_t threshold = 0;
};

struct PackTrace {
  int gpus = 1;
  std::vector<PackEvent> events;
};

// Accepts a JSON array of events, an object {"gpus": n, "events": [...]},
// or one event object per line. Events look like
//   {"op": "place", "pod": "a", "function": "f", "w": 40, "h": 30}
//   {"op": "release", "pod": "a"}
//   {"op": "restructure", "threshold": 6}
// Throws ParseError on malformed input.
PackTrace ParsePackTrace(std::istream& in);

struct PackTraceResult {
  // One JSON object per step, step 0 being the initial state.
  std::vector<std::string> lines;
  int errors = 0;
  int infeasible = 0;
  int breaches = 0;
};

// Replays the trace over `gpus` fresh GPUs. Placement uses BestMatch and
// opens the lowest idle GPU when nothing fits; errors and infeasible
// placements are reported in the step line and the replay continues. After
// every step the rasterized coverage check runs on each GPU.
PackTraceResult RunPackTrace(const PackTrace& trace);

// Cell-by-cell check on the 100x100 grid: every cell is covered by exactly
// one placement or by at least one free rect, never both, and no free rect
// contains another.
std::vector<std::string> RasterCheck(const GpuNode& node);

}  // namespace gshare

#endif  // GSHARE_PACK_TRACE_H_
