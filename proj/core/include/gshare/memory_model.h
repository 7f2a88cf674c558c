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

#ifndef GSHARE_MEMORY_MODEL_H_
#define GSHARE_MEMORY_MODEL_H_

#include <map>

#include "gshare/resource_config.h"

namespace gshare {

// Context overhead of the model storage process, charged once per (model, GPU)
// and already folded into MemorySpec::server_mb. Reporting only.
inline constexpr double kModelContextOverheadMb = 300.0;

// 16 GB V100.
inline constexpr double kDefaultGpuMemoryMb = 16384.0;

// Memory footprint of one function, in MB.
struct MemorySpec {
  // Per pod, when each pod loads its own copy of the model.
  double noshare_mb = 0.0;
  // Per pod, when parameters live in the shared model store.
  double runtime_mb = 0.0;
  // Once per (model, GPU) with sharing: parameters plus context overhead.
  double server_mb = 0.0;

  void Validate() const;

  // Parameter bytes implied by the spec, i.e. server_mb minus the fixed
  // context overhead. Can be negative for malformed inputs.
  double ParameterMb() const { return server_mb - kModelContextOverheadMb; }

  friend bool operator==(const MemorySpec&, const MemorySpec&) = default;
};

enum class SharingMode { kNoShare, kShare };

using MemoryCatalog = std::map<FunctionId, MemorySpec>;

struct GpuMemoryState {
  double capacity_mb = kDefaultGpuMemoryMb;
  // Function -> number of resident pods on this GPU. Zero counts are erased.
  std::map<FunctionId, int> resident;

  void AddPod(const FunctionId& function_id);
  // Throws Error(kNotFound) if the function has no resident pod.
  void RemovePod(const FunctionId& function_id);
};

// Footprint of `count` pods of one model.
double ModelFootprint(const MemorySpec& spec, int count, SharingMode mode);

// Sum of per-model footprints. Throws Error(kNotFound) for a resident model
// missing from the catalog.
double Footprint(const GpuMemoryState& state, const MemoryCatalog& catalog,
                 SharingMode mode);

// True iff one more pod of `function_id` keeps the footprint within capacity.
// Unknown functions are never admitted.
bool Admit(const GpuMemoryState& state, const MemoryCatalog& catalog,
           const FunctionId& function_id, SharingMode mode);

// Largest pod count of a single model that fits an otherwise empty GPU.
int MaxPods(const MemorySpec& spec, double capacity_mb, SharingMode mode);

}  // namespace gshare

#endif  // GSHARE_MEMORY_MODEL_H_
