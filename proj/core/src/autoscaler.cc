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

#include "gshare/autoscaler.h"

#include <algorithm>
#include <cmath>

#include "gshare/errors.h"

namespace gshare {
namespace {

// RPR values of configurations that are mathematically equal can differ in the
// last bits once computed; treat them as ties.
constexpr double kRelativeTieTolerance = 1e-9;

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <=
         kRelativeTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// True when `a` is a strictly better efficient point than `b`.
bool MoreEfficient(const ProfileEntry& a, const ProfileEntry& b) {
  const double ra = Rpr(a.throughput_rps, a.point);
  const double rb = Rpr(b.throughput_rps, b.point);
  if (!NearlyEqual(ra, rb)) return ra > rb;
  const double ca = a.point.SecondCores();
  const double cb = b.point.SecondCores();
  if (!NearlyEqual(ca, cb)) return ca < cb;
  return a.point < b.point;
}

ScalingDecision AddAt(const FunctionProfile& profile, const ProfileEntry& e) {
  return ScalingDecision{profile.function_id(),
                         ScalingAction::kAdd,
                         e.point,
                         e.throughput_rps,
                         {}};
}

}  // namespace

void RunningSet::Push(RunningPod pod) {
  Slot slot{Rpr(pod.throughput_rps, pod.point), next_seq_++, std::move(pod)};
  // Equal RPR within tolerance keeps insertion order.
  auto pos = std::find_if(pods_.begin(), pods_.end(), [&slot](const Slot& s) {
    return s.rpr > slot.rpr && !NearlyEqual(s.rpr, slot.rpr);
  });
  pods_.insert(pos, std::move(slot));
}

bool RunningSet::Remove(const PodId& pod_id) {
  auto it = std::find_if(pods_.begin(), pods_.end(),
                         [&](const Slot& s) { return s.pod.pod_id == pod_id; });
  if (it == pods_.end()) return false;
  pods_.erase(it);
  return true;
}

const RunningPod& RunningSet::Front() const {
  if (pods_.empty()) {
    throw Error(ErrorCode::kNotFound,
                "running set of " + function_id_ + " is empty");
  }
  return pods_.front().pod;
}

double RunningSet::TotalThroughput() const {
  double total = 0.0;
  for (const auto& s : pods_) total += s.pod.throughput_rps;
  return total;
}

std::vector<RunningPod> RunningSet::pods() const {
  std::vector<RunningPod> out;
  out.reserve(pods_.size());
  for (const auto& s : pods_) out.push_back(s.pod);
  return out;
}

double RpsGap(const FunctionProfile& profile, const RunningSet& running,
              const DemandEstimate& demand) {
  double capacity = 0.0;
  for (const auto& pod : running.pods()) {
    capacity += ThroughputAt(profile, pod.point);
  }
  return demand.predicted_rps - capacity;
}

ConfigPoint MostEfficientPoint(const FunctionProfile& profile) {
  if (profile.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "profile of " + profile.function_id() + " has no entries");
  }
  const ProfileEntry* best = &profile.entries().front();
  for (const auto& e : profile.entries()) {
    if (MoreEfficient(e, *best)) best = &e;
  }
  return best->point;
}

std::vector<ScalingDecision> ScaleUp(const FunctionProfile& profile,
                                     double gap) {
  const ConfigPoint eff_point = MostEfficientPoint(profile);
  if (!(gap > 0.0)) return {};
  const ProfileEntry& eff = profile.At(eff_point);
  const double t_eff = eff.throughput_rps;
  if (!(t_eff > 0.0)) {
    throw Error(ErrorCode::kValidation, "profile of " + profile.function_id() +
                                            " has no positive throughput");
  }

  auto n = static_cast<std::size_t>(std::floor(gap / t_eff));
  double residual = gap - static_cast<double>(n) * t_eff;
  // Division noise: 0.3 / 0.1 floors to 2 with a residual of ~0.1.
  if (residual >= t_eff * (1.0 - kRelativeTieTolerance)) {
    ++n;
    residual = 0.0;
  }
  if (residual <= kRelativeTieTolerance * std::max(1.0, gap)) residual = 0.0;

  std::vector<ScalingDecision> decisions(n, AddAt(profile, eff));
  if (residual > 0.0) {
    const ProfileEntry* ideal = nullptr;
    for (const auto& e : profile.entries()) {
      if (!(e.throughput_rps > residual)) continue;
      if (ideal == nullptr) {
        ideal = &e;
        continue;
      }
      const double de = e.throughput_rps - residual;
      const double di = ideal->throughput_rps - residual;
      if (!NearlyEqual(de, di)) {
        if (de < di) ideal = &e;
        continue;
      }
      const double ce = e.point.SecondCores();
      const double ci = ideal->point.SecondCores();
      if (!NearlyEqual(ce, ci)) {
        if (ce < ci) ideal = &e;
        continue;
      }
      if (e.point < ideal->point) ideal = &e;
    }
    decisions.push_back(AddAt(profile, ideal != nullptr ? *ideal : eff));
  }
  return decisions;
}

std::vector<ScalingDecision> ScaleDown(const RunningSet& running, double gap) {
  std::vector<ScalingDecision> decisions;
  double delta = gap;
  for (const auto& pod : running.pods()) {
    if (!(delta < 0.0)) break;
    if (delta + pod.throughput_rps > 0.0) break;
    decisions.push_back(ScalingDecision{running.function_id(),
                                        ScalingAction::kRemove, pod.point,
                                        pod.throughput_rps, pod.pod_id});
    delta += pod.throughput_rps;
  }
  return decisions;
}

std::vector<ScalingDecision> Autoscale(const FunctionProfile& profile,
                                       const RunningSet& running,
                                       const DemandEstimate& demand) {
  const double gap = RpsGap(profile, running, demand);
  if (gap > 0.0) return ScaleUp(profile, gap);
  if (gap < 0.0) return ScaleDown(running, gap);
  return {};
}

MaxRecentPredictor::MaxRecentPredictor(int windows) : windows_(windows) {
  if (windows_ < 1) {
    throw Error(ErrorCode::kValidation, "predictor needs at least one window");
  }
}

double MaxRecentPredictor::Predict(std::span<const double> history) const {
  if (history.empty()) {
    throw Error(ErrorCode::kEmptyInput, "demand history is empty");
  }
  const std::size_t k = std::min<std::size_t>(history.size(), windows_);
  const auto recent = history.last(k);
  return *std::max_element(recent.begin(), recent.end());
}

DemandEstimate PredictDemand(const FunctionId& function_id,
                             std::span<const double> history, int windows) {
  return DemandEstimate{function_id,
                        MaxRecentPredictor(windows).Predict(history)};
}

}  // namespace gshare
