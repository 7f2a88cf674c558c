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

#ifndef GSHARE_PACKER_H_
#define GSHARE_PACKER_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gshare/memory_model.h"
#include "gshare/resource_config.h"

namespace gshare {

// Side length of a GPU in packing units: 100% of the window along x (quota)
// and 100% of the SMs along y.
inline constexpr int kGpuExtent = 100;
inline constexpr std::int64_t kGpuArea =
    static_cast<std::int64_t>(kGpuExtent) * kGpuExtent;

// Axis-aligned rectangle in integer percent units. x/w run along the quota
// axis, y/h along the SM axis.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int Right() const { return x + w; }
  int Top() const { return y + h; }
  // secondCores, in percent-squared units.
  std::int64_t Area() const { return static_cast<std::int64_t>(w) * h; }

  bool Contains(const Rect& other) const {
    return other.x >= x && other.y >= y && other.Right() <= Right() &&
           other.Top() <= Top();
  }
  bool Intersects(const Rect& other) const {
    return x < other.Right() && other.x < Right() && y < other.Top() &&
           other.y < Top();
  }

  // Throws Error(kValidation) unless w, h > 0 and the rect lies in the GPU.
  void Validate() const;
  std::string ToString() const;

  friend auto operator<=>(const Rect&, const Rect&) = default;
};

inline std::int64_t Area(const Rect& rect) { return rect.Area(); }

inline constexpr Rect kFullGpu{0, 0, kGpuExtent, kGpuExtent};

// A pod waiting for placement: width = 100 * quota_limit, height = SM share.
struct PodRequest {
  PodId pod_id;
  FunctionId function_id;
  int w = 0;
  int h = 0;

  static PodRequest FromConfig(PodId pod_id, FunctionId function_id,
                               const ResourceConfig& config);

  std::int64_t Area() const { return static_cast<std::int64_t>(w) * h; }
  void Validate() const;
};

struct Placement {
  Rect rect;
  FunctionId function_id;
};

enum class ReplaceOrder {
  kDescendingArea,
  kPodId,
};

enum class RestructureOutcome {
  kNoop,
  kRebuilt,
  kAborted,
};

// One GPU: its free-rectangle list, the pods bound to it and their memory.
class GpuNode {
 public:
  explicit GpuNode(int gpu_id, double memory_capacity_mb = kDefaultGpuMemoryMb);

  int gpu_id() const { return gpu_id_; }
  const std::vector<Rect>& free_rects() const { return free_rects_; }
  const std::map<PodId, Placement>& placements() const { return placements_; }
  const GpuMemoryState& memory() const { return memory_; }
  bool empty() const { return placements_.empty(); }

  // Binds `req` to the bottom-left corner of the free rect `rect`, splits
  // the rect into its two maximal residuals, subdivides every other free
  // rect that overlaps the placement and prunes contained rects.
  // Throws Error(kNotFound) when `rect` is not in the free list,
  // Error(kValidation) when req does not fit, Error(kConflict) when the pod
  // is already placed here.
  Rect Place(const Rect& rect, const PodRequest& req);

  // Removes the pod and appends its rect verbatim to the free list
  // (keep-restructure). Throws Error(kNotFound) for unknown pods.
  Rect Release(const PodId& pod_id);

  // When the free list holds more than `threshold` rects, rebuilds it from a
  // single full-GPU rect by re-placing every pod (best area fit within this
  // GPU, in `order`). An infeasible re-placement leaves the node unchanged.
  // A node without pods always collapses back to the full rect.
  RestructureOutcome Restructure(
      std::size_t threshold,
      ReplaceOrder order = ReplaceOrder::kDescendingArea);

  std::int64_t FreeArea() const;
  std::int64_t LargestFreeArea() const;
  // 1 - largest free rect / total free area; 0 with no free area.
  double FragmentationIndex() const;

  // Geometric invariants that must hold after every operation; returns a
  // description of each breach (empty when healthy).
  std::vector<std::string> CheckInvariants(bool require_coverage = true) const;

  // JSON description of free rects and placements.
  std::string DebugDump() const;

 private:
  int gpu_id_;
  std::vector<Rect> free_rects_;
  std::map<PodId, Placement> placements_;
  GpuMemoryState memory_;
};

// Memory admission hook for BestMatch; a null catalog admits everything.
struct MemoryAdmission {
  const MemoryCatalog* catalog = nullptr;
  SharingMode mode = SharingMode::kShare;

  bool Admits(const GpuNode& node, const FunctionId& function_id) const;
};

struct Match {
  std::size_t node_index = 0;
  int gpu_id = 0;
  Rect rect;
  std::int64_t area_diff = 0;
};

// Global best area fit: among free rects on all nodes that contain the pod
// and whose node admits its memory, the one with the smallest
// Area(rect) - Area(req); ties by lower gpu_id, then lower y, then lower x.
// std::nullopt means a new GPU is required.
std::optional<Match> BestMatch(std::span<const GpuNode> nodes,
                               const PodRequest& req,
                               const MemoryAdmission& admission = {});

// Area of the union of rects (coordinate compression).
std::int64_t UnionArea(std::span<const Rect> rects);

}  // namespace gshare

#endif  // GSHARE_PACKER_H_
