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

#ifndef GSHARE_SCENARIO_H_
#define GSHARE_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gshare/memory_model.h"
#include "gshare/profiles.h"
#include "gshare/workload.h"

namespace gshare {

inline constexpr int kScenarioSchemaVersion = 1;

struct FunctionSpec {
  FunctionProfile profile;
  WorkloadSpec workload;
  // Requests arriving while this many are already waiting are dropped.
  std::optional<std::int64_t> max_queue;
};

struct Scenario {
  int fleet_size = 1;
  double window_ms = 1000.0;
  int epoch_windows = 5;
  int windows = 60;
  std::uint64_t seed = 0;
  int cold_start_windows = 2;
  double quantum = 0.02;
  std::size_t restructure_threshold = 16;
  double gpu_memory_mb = kDefaultGpuMemoryMb;
  SharingMode sharing = SharingMode::kShare;
  // Adds queued requests / epoch length to the predicted rps so a backlog
  // built during under-provisioning is drained within about one epoch.
  bool backlog_drain = true;
  int predictor_windows = 3;
  ArrivalPattern arrival_pattern = ArrivalPattern::kEven;
  std::vector<FunctionSpec> functions;

  // Throws Error(kValidation) describing the first problem found.
  void Validate() const;

  double window_s() const { return window_ms / 1000.0; }
};

// Parses the JSON scenario format. Relative file references (profile files,
// replay traces) resolve against `base_dir`.
Scenario ParseScenario(const std::string& json_text,
                       const std::string& base_dir = ".");
Scenario LoadScenario(const std::string& path);

}  // namespace gshare

#endif  // GSHARE_SCENARIO_H_
