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

#include "gshare/token_backend.h"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gshare/errors.h"
#include "gshare/profiles.h"

namespace gshare {
namespace {

// Absorbs rounding in accumulated quota sums, e.g. 0.2 + 0.1 + 0.1 vs 0.4.
constexpr double kQuotaEpsilon = 1e-12;

}  // namespace

BackendTable::BackendTable(BackendOptions options) : options_(options) {
  if (!(options_.window_ms > 0.0)) {
    throw Error(ErrorCode::kValidation, "window_ms must be positive");
  }
  if (!(options_.quantum > 0.0 && options_.quantum <= 1.0)) {
    throw Error(ErrorCode::kValidation, "quantum must be in (0, 1]");
  }
}

void BackendTable::RegisterPod(const PodId& pod_id,
                               const ResourceConfig& config) {
  config.Validate();
  if (pods_.contains(pod_id)) {
    throw Error(ErrorCode::kConflict,
                "pod '" + pod_id + "' is already registered");
  }
  pods_.emplace(pod_id,
                PodQuotaState{pod_id, config.quota_request, config.quota_limit,
                              config.sm_partition, 0.0});
}

void BackendTable::UnregisterPod(const PodId& pod_id) {
  auto it = pods_.find(pod_id);
  if (it == pods_.end()) {
    throw Error(ErrorCode::kNotFound, "pod '" + pod_id + "' is not registered");
  }
  if (holders_.contains(pod_id)) {
    throw Error(ErrorCode::kInvariant,
                "pod '" + pod_id + "' still holds a live token");
  }
  pods_.erase(it);
}

const PodQuotaState& BackendTable::pod(const PodId& pod_id) const {
  auto it = pods_.find(pod_id);
  if (it == pods_.end()) {
    throw Error(ErrorCode::kNotFound, "pod '" + pod_id + "' is not registered");
  }
  return it->second;
}

bool BackendTable::HoldsToken(const PodId& pod_id) const {
  return holders_.contains(pod_id);
}

FilterResult BackendTable::Filter() const {
  FilterResult result;
  for (const auto& [id, state] : pods_) {
    if (state.QRemain() <= kQuotaEpsilon) {
      result.blocked.push_back(id);
    } else {
      result.candidates.push_back(id);
    }
  }
  return result;
}

std::vector<PodId> BackendTable::Enqueue(
    const std::vector<PodId>& candidates) const {
  std::vector<const PodQuotaState*> states;
  states.reserve(candidates.size());
  for (const auto& id : candidates) states.push_back(&pod(id));
  std::sort(states.begin(), states.end(),
            [](const PodQuotaState* a, const PodQuotaState* b) {
              if (a->QMiss() != b->QMiss()) return a->QMiss() > b->QMiss();
              return a->pod_id < b->pod_id;
            });
  std::vector<PodId> queue;
  queue.reserve(states.size());
  for (const auto* s : states) queue.push_back(s->pod_id);
  return queue;
}

std::vector<Token> BackendTable::Dispatch(const std::vector<PodId>& queue,
                                          double now) {
  std::vector<Token> granted;
  for (const auto& id : queue) {
    const PodQuotaState& state = pod(id);
    if (holders_.contains(id)) continue;
    const double remain = state.QRemain();
    if (remain <= kQuotaEpsilon) continue;
    if (state.s_sms + s_running_ > kSmGlobalLimit) break;
    Token token{next_token_++, id, std::min(options_.quantum, remain), now};
    s_running_ += state.s_sms;
    holders_.insert(id);
    live_.emplace(token.id, token);
    granted.push_back(std::move(token));
  }
  return granted;
}

void BackendTable::CompleteToken(TokenId token_id, double elapsed) {
  auto it = live_.find(token_id);
  if (it == live_.end()) {
    throw Error(ErrorCode::kNotFound,
                "token " + std::to_string(token_id) + " is not live");
  }
  const Token& token = it->second;
  if (!(elapsed >= 0.0) || elapsed > token.duration + kQuotaEpsilon) {
    throw Error(ErrorCode::kValidation,
                "token " + std::to_string(token_id) +
                    " elapsed time is outside [0, granted duration]");
  }
  PodQuotaState& state = pods_.at(token.pod_id);
  state.q_used += elapsed;
  s_running_ -= state.s_sms;
  holders_.erase(token.pod_id);
  if (holders_.empty()) s_running_ = 0.0;
  live_.erase(it);
}

void BackendTable::ResetWindow() {
  for (auto& [id, state] : pods_) state.q_used = 0.0;
}

std::string BackendTable::DebugDump() const {
  std::ostringstream os;
  os << "{\"window_ms\":" << FormatShortest(options_.window_ms)
     << ",\"quantum\":" << FormatShortest(options_.quantum)
     << ",\"s_running\":" << FormatShortest(s_running_) << ",\"pods\":[";
  bool first = true;
  for (const auto& [id, s] : pods_) {
    if (!first) os << ",";
    first = false;
    os << "{\"pod\":" << nlohmann::json(id).dump()
       << ",\"q_request\":" << FormatShortest(s.q_request)
       << ",\"q_limit\":" << FormatShortest(s.q_limit)
       << ",\"s_sms\":" << FormatShortest(s.s_sms)
       << ",\"q_used\":" << FormatShortest(s.q_used)
       << ",\"token\":" << (holders_.contains(id) ? "true" : "false") << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace gshare
