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

#ifndef GSHARE_RESOURCE_CONFIG_H_
#define GSHARE_RESOURCE_CONFIG_H_

#include <compare>
#include <cstdint>
#include <string>

namespace gshare {

using FunctionId = std::string;
using PodId = std::string;

// Upper bound on concurrent SM share of one GPU, in percent.
inline constexpr double kSmGlobalLimit = 100.0;

// A point in the spatio-temporal configuration space of one GPU.
//
// SM share is kept in percent (e.g. 12 means 12% of the SMs), the time quota
// as a fraction of the scheduling window (0.4 means 40% of each window).
// All unit conversions go through the accessors below.
struct ConfigPoint {
  double sm_partition = 0.0;
  double quota = 0.0;

  double SmFraction() const { return sm_partition / 100.0; }
  // "secondCores": the product of SM fraction and quota fraction.
  double SecondCores() const { return SmFraction() * quota; }

  // Throws Error(kValidation) unless 0 < sm_partition <= 100, 0 < quota <= 1.
  void Validate() const;

  std::string ToString() const;

  friend auto operator<=>(const ConfigPoint&, const ConfigPoint&) = default;
};

// Spatio-temporal allocation attached to a pod.
struct ResourceConfig {
  double sm_partition = 0.0;
  double quota_request = 0.0;
  double quota_limit = 0.0;
  std::int64_t gpu_mem_bytes = 0;

  // Same SM share with request == limit == point.quota.
  static ResourceConfig FromPoint(const ConfigPoint& point);

  // Throws Error(kValidation) on out-of-range fields or request > limit.
  void Validate() const;
};

// Converts a percent-valued extent to integer packing units. Values within
// 1e-6 of an integer snap to it; anything else rounds up so a pod never gets
// less than it asked for.
int ToPercentUnits(double percent);

}  // namespace gshare

#endif  // GSHARE_RESOURCE_CONFIG_H_
