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

#ifndef GSHARE_AUTOSCALER_H_
#define GSHARE_AUTOSCALER_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gshare/profiles.h"
#include "gshare/resource_config.h"

namespace gshare {

struct DemandEstimate {
  FunctionId function_id;
  double predicted_rps = 0.0;
};

struct RunningPod {
  PodId pod_id;
  ConfigPoint point;
  double throughput_rps = 0.0;
};

// Running pods of one function ordered by ascending RPR; equal RPR keeps
// insertion order, so the front is always the next scale-down victim.
class RunningSet {
 public:
  RunningSet() = default;
  explicit RunningSet(FunctionId function_id)
      : function_id_(std::move(function_id)) {}

  const FunctionId& function_id() const { return function_id_; }

  void Push(RunningPod pod);
  // Returns false when the pod is not in the set.
  bool Remove(const PodId& pod_id);

  const RunningPod& Front() const;
  bool empty() const { return pods_.empty(); }
  std::size_t size() const { return pods_.size(); }
  double TotalThroughput() const;

  std::vector<RunningPod> pods() const;

 private:
  struct Slot {
    double rpr;
    std::uint64_t seq;
    RunningPod pod;
  };
  FunctionId function_id_;
  std::vector<Slot> pods_;
  std::uint64_t next_seq_ = 0;
};

enum class ScalingAction { kAdd, kRemove };

struct ScalingDecision {
  FunctionId function_id;
  ScalingAction action = ScalingAction::kAdd;
  ConfigPoint point;
  double throughput_rps = 0.0;
  // Set for removals only.
  PodId pod_id;
};

// R - sum of profiled throughput of the running pods.
double RpsGap(const FunctionProfile& profile, const RunningSet& running,
              const DemandEstimate& demand);

// The most efficient profiled point: max RPR, ties by smaller secondCores,
// then by point order. Throws Error(kEmptyInput) on an empty profile.
ConfigPoint MostEfficientPoint(const FunctionProfile& profile);

// Scale-up for a positive gap: floor(gap / T_eff) pods at the most efficient
// point, plus one pod for the residual at the smallest point whose
// throughput exceeds it (falling back to the efficient point). No residual
// pod when the gap divides evenly. Returns nothing for gap <= 0.
std::vector<ScalingDecision> ScaleUp(const FunctionProfile& profile,
                                     double gap);

// Scale-down for a negative gap. Walks the set from the least efficient pod
// and removes it while that does not push the gap above zero; stops at the
// first pod whose removal would. Returns nothing for gap >= 0.
std::vector<ScalingDecision> ScaleDown(const RunningSet& running, double gap);

// RpsGap followed by ScaleUp or ScaleDown.
std::vector<ScalingDecision> Autoscale(const FunctionProfile& profile,
                                       const RunningSet& running,
                                       const DemandEstimate& demand);

class DemandPredictor {
 public:
  virtual ~DemandPredictor() = default;
  // `history` holds observed rps per window, oldest first.
  virtual double Predict(std::span<const double> history) const = 0;
};

// Max over the most recent `windows` observations.
class MaxRecentPredictor : public DemandPredictor {
 public:
  explicit MaxRecentPredictor(int windows = 3);
  double Predict(std::span<const double> history) const override;

 private:
  int windows_;
};

// Convenience wrapper around MaxRecentPredictor. Throws Error(kEmptyInput)
// for an empty history.
DemandEstimate PredictDemand(const FunctionId& function_id,
                             std::span<const double> history, int windows = 3);

}  // namespace gshare

#endif  // GSHARE_AUTOSCALER_H_
