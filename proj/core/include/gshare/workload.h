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

#ifndef GSHARE_WORKLOAD_H_
#define GSHARE_WORKLOAD_H_

#include <cstdint>
#include <string>
#include <vector>

namespace gshare {

enum class WorkloadKind { kCounts, kConstant, kStep, kSinusoid, kReplay };

// Where requests land inside a window.
enum class ArrivalPattern {
  // Evenly spaced at (i + 0.5) / n of the window.
  kEven,
  // Sorted uniform draws from the scenario RNG.
  kUniform,
};

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kConstant;
  // kCounts / kReplay: explicit per-window arrivals. Windows past the end
  // receive no requests.
  std::vector<std::int64_t> counts;
  // kConstant: rps. kStep: rps before the step. kSinusoid: mean rps.
  double rps = 0.0;
  // kStep.
  double step_rps = 0.0;
  int step_window = 0;
  // kSinusoid.
  double amplitude_rps = 0.0;
  double period_windows = 1.0;
  // Draw Poisson counts around the rate instead of rounding it.
  bool poisson = false;

  void Validate() const;
};

// Offered load of window `w` in requests per second, before rounding.
double OfferedRps(const WorkloadSpec& spec, int window);

// Per-window arrival counts. Fractional expected counts are rounded with a
// running carry so the long-run mean is exact; with `poisson` set, counts
// are drawn from a Poisson distribution seeded by `seed`.
std::vector<std::int64_t> GenerateCounts(const WorkloadSpec& spec, int windows,
                                         double window_s, std::uint64_t seed);

// Reads one non-negative integer count per line ('#' starts a comment).
std::vector<std::int64_t> LoadReplayCounts(const std::string& path);

// Arrival offsets in [0, window_s) for `count` requests, ascending.
std::vector<double> ArrivalOffsets(std::int64_t count, double window_s,
                                   ArrivalPattern pattern, std::uint64_t seed);

}  // namespace gshare

#endif  // GSHARE_WORKLOAD_H_
