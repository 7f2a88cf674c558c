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

#ifndef GSHARE_TOKEN_BACKEND_H_
#define GSHARE_TOKEN_BACKEND_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gshare/resource_config.h"

namespace gshare {

// Quota bookkeeping of one registered pod. Quotas are fractions of a window.
struct PodQuotaState {
  PodId pod_id;
  double q_request = 0.0;
  double q_limit = 0.0;
  double s_sms = 0.0;
  double q_used = 0.0;

  double QMiss() const { return q_request - q_used; }
  double QRemain() const { return q_limit - q_used; }
};

using TokenId = std::uint64_t;

// Permission for a pod to launch work for `duration` (window fraction).
struct Token {
  TokenId id = 0;
  PodId pod_id;
  double duration = 0.0;
  double issued_at = 0.0;
};

struct BackendOptions {
  double window_ms = 1000.0;
  // Longest single token, as a fraction of the window.
  double quantum = 0.02;
};

struct FilterResult {
  std::vector<PodId> blocked;
  std::vector<PodId> candidates;
};

// Per-GPU multi-token scheduler table. Each window it filters pods that have
// used up their quota limit, orders the rest by quota deficit and hands out
// concurrent tokens while the summed SM share of token holders stays within
// kSmGlobalLimit.
//
// Single writer: the simulation loop owns the table.
class BackendTable {
 public:
  explicit BackendTable(BackendOptions options = {});

  const BackendOptions& options() const { return options_; }

  // Throws Error(kConflict) for a known pod_id and Error(kValidation) for an
  // invalid config.
  void RegisterPod(const PodId& pod_id, const ResourceConfig& config);
  // Throws Error(kNotFound) for unknown pods, Error(kInvariant) when the pod
  // still holds a live token.
  void UnregisterPod(const PodId& pod_id);

  // Pods with q_limit - q_used <= 0 are blocked; the rest are candidates.
  // Both lists are in pod_id order.
  FilterResult Filter() const;

  // Orders candidates by Q_miss descending, ties by pod_id. Pods whose usage
  // already exceeds q_request keep their place at the tail.
  std::vector<PodId> Enqueue(const std::vector<PodId>& candidates) const;

  // Grants tokens to queue heads while s_sms + s_running <= 100 and stops at
  // the first pod that would exceed the cap. Pods already holding a live
  // token are skipped. Token length is min(quantum, q_limit - q_used).
  std::vector<Token> Dispatch(const std::vector<PodId>& queue,
                              double now = 0.0);

  // Charges `elapsed` (window fraction) to the pod and retires the token.
  // Throws Error(kNotFound) for unknown tokens, Error(kValidation) when
  // elapsed is negative or exceeds the granted duration.
  void CompleteToken(TokenId token_id, double elapsed);

  // Starts a new window: zeroes q_used, leaves live tokens alone.
  void ResetWindow();

  double s_running() const { return s_running_; }
  const std::map<PodId, PodQuotaState>& pods() const { return pods_; }
  const PodQuotaState& pod(const PodId& pod_id) const;
  bool Contains(const PodId& pod_id) const { return pods_.contains(pod_id); }
  bool HoldsToken(const PodId& pod_id) const;
  const std::map<TokenId, Token>& live_tokens() const { return live_; }

  // One-line JSON snapshot of the table for debugging.
  std::string DebugDump() const;

 private:
  BackendOptions options_;
  std::map<PodId, PodQuotaState> pods_;
  std::map<TokenId, Token> live_;
  std::set<PodId> holders_;
  double s_running_ = 0.0;
  TokenId next_token_ = 1;
};

}  // namespace gshare

#endif  // GSHARE_TOKEN_BACKEND_H_
