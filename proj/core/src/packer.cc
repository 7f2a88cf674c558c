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

#include "gshare/packer.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gshare/errors.h"

namespace gshare {
namespace {

// Up to four maximal pieces of `r` left after cutting out `cut`.
void Subdivide(const Rect& r, const Rect& cut, std::vector<Rect>& out) {
  if (cut.x > r.x) out.push_back(Rect{r.x, r.y, cut.x - r.x, r.h});
  if (cut.Right() < r.Right()) {
    out.push_back(Rect{cut.Right(), r.y, r.Right() - cut.Right(), r.h});
  }
  if (cut.y > r.y) out.push_back(Rect{r.x, r.y, r.w, cut.y - r.y});
  if (cut.Top() < r.Top()) {
    out.push_back(Rect{r.x, cut.Top(), r.w, r.Top() - cut.Top()});
  }
}

// Drops every rect contained in another one; of identical rects the first
// survives.
void PruneContained(std::vector<Rect>& rects) {
  std::vector<bool> dead(rects.size(), false);
  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (dead[i]) continue;
    for (std::size_t j = 0; j < rects.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (rects[j].Contains(rects[i])) {
        // Keep the earlier of two identical rects.
        if (rects[i] == rects[j] && i < j) continue;
        dead[i] = true;
        break;
      }
    }
  }
  std::vector<Rect> kept;
  kept.reserve(rects.size());
  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (!dead[i]) kept.push_back(rects[i]);
  }
  rects = std::move(kept);
}

bool BetterCandidate(std::int64_t diff, int gpu_id, const Rect& rect,
                     const Match& best) {
  if (diff != best.area_diff) return diff < best.area_diff;
  if (gpu_id != best.gpu_id) return gpu_id < best.gpu_id;
  if (rect.y != best.rect.y) return rect.y < best.rect.y;
  return rect.x < best.rect.x;
}

}  // namespace

void Rect::Validate() const {
  if (w <= 0 || h <= 0 || x < 0 || y < 0 || Right() > kGpuExtent ||
      Top() > kGpuExtent) {
    throw Error(ErrorCode::kValidation,
                "rect " + ToString() + " is outside the GPU or empty");
  }
}

std::string Rect::ToString() const {
  std::ostringstream os;
  os << "(" << x << "," << y << "," << w << "," << h << ")";
  return os.str();
}

PodRequest PodRequest::FromConfig(PodId pod_id, FunctionId function_id,
                                  const ResourceConfig& config) {
  config.Validate();
  PodRequest req{std::move(pod_id), std::move(function_id),
                 ToPercentUnits(100.0 * config.quota_limit),
                 ToPercentUnits(config.sm_partition)};
  req.Validate();
  return req;
}

void PodRequest::Validate() const {
  if (w <= 0 || h <= 0 || w > kGpuExtent || h > kGpuExtent) {
    throw Error(ErrorCode::kValidation,
                "pod '" + pod_id + "' size must be within (0, 100]");
  }
}

GpuNode::GpuNode(int gpu_id, double memory_capacity_mb)
    : gpu_id_(gpu_id), free_rects_{kFullGpu} {
  memory_.capacity_mb = memory_capacity_mb;
}

Rect GpuNode::Place(const Rect& rect, const PodRequest& req) {
  req.Validate();
  auto it = std::find(free_rects_.begin(), free_rects_.end(), rect);
  if (it == free_rects_.end()) {
    throw Error(ErrorCode::kNotFound, "rect " + rect.ToString() +
                                          " is not free on GPU " +
                                          std::to_string(gpu_id_));
  }
  if (req.w > rect.w || req.h > rect.h) {
    throw Error(ErrorCode::kValidation,
                "pod '" + req.pod_id + "' does not fit in " + rect.ToString());
  }
  if (placements_.contains(req.pod_id)) {
    throw Error(ErrorCode::kConflict, "pod '" + req.pod_id +
                                          "' is already placed on GPU " +
                                          std::to_string(gpu_id_));
  }

  const Rect placed{rect.x, rect.y, req.w, req.h};
  free_rects_.erase(it);

  std::vector<Rect> next;
  next.reserve(free_rects_.size() + 6);
  std::vector<Rect> pieces;
  for (const Rect& r : free_rects_) {
    if (!r.Intersects(placed)) {
      next.push_back(r);
      continue;
    }
    pieces.clear();
    Subdivide(r, placed, pieces);
    next.insert(next.end(), pieces.begin(), pieces.end());
  }
  // Right and upper residuals of the consumed rect, both maximal.
  if (rect.w > req.w) {
    next.push_back(Rect{rect.x + req.w, rect.y, rect.w - req.w, rect.h});
  }
  if (rect.h > req.h) {
    next.push_back(Rect{rect.x, rect.y + req.h, rect.w, rect.h - req.h});
  }
  PruneContained(next);
  free_rects_ = std::move(next);

  placements_.emplace(req.pod_id, Placement{placed, req.function_id});
  memory_.AddPod(req.function_id);
  return placed;
}

Rect GpuNode::Release(const PodId& pod_id) {
  auto it = placements_.find(pod_id);
  if (it == placements_.end()) {
    throw Error(
        ErrorCode::kNotFound,
        "pod '" + pod_id + "' is not placed on GPU " + std::to_string(gpu_id_));
  }
  const Rect rect = it->second.rect;
  memory_.RemovePod(it->second.function_id);
  placements_.erase(it);
  free_rects_.push_back(rect);
  return rect;
}

RestructureOutcome GpuNode::Restructure(std::size_t threshold,
                                        ReplaceOrder order) {
  if (placements_.empty()) {
    if (free_rects_.size() == 1 && free_rects_.front() == kFullGpu) {
      return RestructureOutcome::kNoop;
    }
    free_rects_ = {kFullGpu};
    return RestructureOutcome::kRebuilt;
  }
  if (free_rects_.size() <= threshold) return RestructureOutcome::kNoop;

  std::vector<std::pair<PodId, Placement>> pods(placements_.begin(),
                                                placements_.end());
  if (order == ReplaceOrder::kDescendingArea) {
    std::stable_sort(pods.begin(), pods.end(),
                     [](const auto& a, const auto& b) {
                       return a.second.rect.Area() > b.second.rect.Area();
                     });
  }

  GpuNode rebuilt(gpu_id_, memory_.capacity_mb);
  for (const auto& [pod_id, placement] : pods) {
    PodRequest req{pod_id, placement.function_id, placement.rect.w,
                   placement.rect.h};
    auto match = BestMatch(std::span<const GpuNode>(&rebuilt, 1), req);
    if (!match) return RestructureOutcome::kAborted;
    rebuilt.Place(match->rect, req);
  }
  free_rects_ = std::move(rebuilt.free_rects_);
  placements_ = std::move(rebuilt.placements_);
  return RestructureOutcome::kRebuilt;
}

std::int64_t GpuNode::FreeArea() const { return UnionArea(free_rects_); }

std::int64_t GpuNode::LargestFreeArea() const {
  std::int64_t largest = 0;
  for (const auto& r : free_rects_) largest = std::max(largest, r.Area());
  return largest;
}

double GpuNode::FragmentationIndex() const {
  const std::int64_t total = FreeArea();
  if (total == 0) return 0.0;
  return 1.0 -
         static_cast<double>(LargestFreeArea()) / static_cast<double>(total);
}

std::vector<std::string> GpuNode::CheckInvariants(bool require_coverage) const {
  std::vector<std::string> breaches;
  for (std::size_t i = 0; i < free_rects_.size(); ++i) {
    const Rect& a = free_rects_[i];
    if (a.w <= 0 || a.h <= 0 || a.x < 0 || a.y < 0 || a.Right() > kGpuExtent ||
        a.Top() > kGpuExtent) {
      breaches.push_back("free rect " + a.ToString() + " is malformed");
    }
    for (std::size_t j = 0; j < free_rects_.size(); ++j) {
      if (i != j && free_rects_[j].Contains(a)) {
        breaches.push_back("free rect " + a.ToString() + " is contained in " +
                           free_rects_[j].ToString());
      }
    }
  }
  for (auto it = placements_.begin(); it != placements_.end(); ++it) {
    const Rect& p = it->second.rect;
    for (const Rect& f : free_rects_) {
      if (p.Intersects(f)) {
        breaches.push_back("placement " + it->first + " " + p.ToString() +
                           " overlaps free rect " + f.ToString());
      }
    }
    for (auto jt = std::next(it); jt != placements_.end(); ++jt) {
      if (p.Intersects(jt->second.rect)) {
        breaches.push_back("placements " + it->first + " and " + jt->first +
                           " overlap");
      }
    }
  }
  if (require_coverage && breaches.empty()) {
    std::int64_t used = 0;
    for (const auto& [id, p] : placements_) used += p.rect.Area();
    if (FreeArea() + used != kGpuArea) {
      breaches.push_back("free rects do not cover the unplaced area");
    }
  }
  return breaches;
}

std::string GpuNode::DebugDump() const {
  std::vector<Rect> sorted = free_rects_;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  os << "{\"gpu\":" << gpu_id_ << ",\"free_rects\":[";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Rect& r = sorted[i];
    os << (i ? "," : "") << "[" << r.x << "," << r.y << "," << r.w << "," << r.h
       << "]";
  }
  os << "],\"placements\":{";
  bool first = true;
  for (const auto& [id, p] : placements_) {
    os << (first ? "" : ",") << "\"" << id << "\":[" << p.rect.x << ","
       << p.rect.y << "," << p.rect.w << "," << p.rect.h << "]";
    first = false;
  }
  os << "}}";
  return os.str();
}

bool MemoryAdmission::Admits(const GpuNode& node,
                             const FunctionId& function_id) const {
  if (catalog == nullptr) return true;
  return Admit(node.memory(), *catalog, function_id, mode);
}

std::optional<Match> BestMatch(std::span<const GpuNode> nodes,
                               const PodRequest& req,
                               const MemoryAdmission& admission) {
  std::optional<Match> best;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GpuNode& node = nodes[i];
    bool admitted = false;
    bool admission_checked = false;
    for (const Rect& rect : node.free_rects()) {
      if (req.w > rect.w || req.h > rect.h) continue;
      if (!admission_checked) {
        admitted = admission.Admits(node, req.function_id);
        admission_checked = true;
      }
      if (!admitted) break;
      const std::int64_t diff = rect.Area() - req.Area();
      if (!best || BetterCandidate(diff, node.gpu_id(), rect, *best)) {
        best = Match{i, node.gpu_id(), rect, diff};
      }
    }
  }
  return best;
}

std::int64_t UnionArea(std::span<const Rect> rects) {
  std::vector<int> xs;
  std::vector<int> ys;
  for (const auto& r : rects) {
    xs.push_back(r.x);
    xs.push_back(r.Right());
    ys.push_back(r.y);
    ys.push_back(r.Top());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::int64_t area = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Rect cell{xs[i], ys[j], xs[i + 1] - xs[i], ys[j + 1] - ys[j]};
      for (const auto& r : rects) {
        if (r.Contains(cell)) {
          area += cell.Area();
          break;
        }
      }
    }
  }
  return area;
}

}  // namespace gshare
