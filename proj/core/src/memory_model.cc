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

#include "gshare/memory_model.h"

#include <cmath>

#include "gshare/errors.h"

namespace gshare {

void MemorySpec::Validate() const {
  if (!(noshare_mb > 0.0) || !(runtime_mb > 0.0) || !(server_mb > 0.0) ||
      !std::isfinite(noshare_mb) || !std::isfinite(runtime_mb) ||
      !std::isfinite(server_mb)) {
    throw Error(ErrorCode::kValidation,
                "memory fields must be finite and positive");
  }
}

void GpuMemoryState::AddPod(const FunctionId& function_id) {
  ++resident[function_id];
}

void GpuMemoryState::RemovePod(const FunctionId& function_id) {
  auto it = resident.find(function_id);
  if (it == resident.end()) {
    throw Error(ErrorCode::kNotFound,
                "no resident pod of function '" + function_id + "'");
  }
  if (--it->second == 0) resident.erase(it);
}

double ModelFootprint(const MemorySpec& spec, int count, SharingMode mode) {
  if (count <= 0) return 0.0;
  if (mode == SharingMode::kShare) {
    return spec.server_mb + count * spec.runtime_mb;
  }
  return count * spec.noshare_mb;
}

double Footprint(const GpuMemoryState& state, const MemoryCatalog& catalog,
                 SharingMode mode) {
  double total = 0.0;
  for (const auto& [function_id, count] : state.resident) {
    auto it = catalog.find(function_id);
    if (it == catalog.end()) {
      throw Error(ErrorCode::kNotFound,
                  "no memory spec for model '" + function_id + "'");
    }
    total += ModelFootprint(it->second, count, mode);
  }
  return total;
}

bool Admit(const GpuMemoryState& state, const MemoryCatalog& catalog,
           const FunctionId& function_id, SharingMode mode) {
  if (!catalog.contains(function_id)) return false;
  GpuMemoryState next = state;
  next.AddPod(function_id);
  return Footprint(next, catalog, mode) <= state.capacity_mb;
}

int MaxPods(const MemorySpec& spec, double capacity_mb, SharingMode mode) {
  int count = 0;
  while (ModelFootprint(spec, count + 1, mode) <= capacity_mb) ++count;
  return count;
}

}  // namespace gshare
