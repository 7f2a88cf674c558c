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

#include "gshare/resource_config.h"

#include <cmath>
#include <sstream>

#include "gshare/errors.h"

namespace gshare {

void ConfigPoint::Validate() const {
  if (!(sm_partition > 0.0 && sm_partition <= 100.0)) {
    throw Error(ErrorCode::kValidation,
                "sm_partition must be in (0, 100], got " + ToString());
  }
  if (!(quota > 0.0 && quota <= 1.0)) {
    throw Error(ErrorCode::kValidation,
                "quota must be in (0, 1], got " + ToString());
  }
}

std::string ConfigPoint::ToString() const {
  std::ostringstream os;
  os << "(" << sm_partition << "%, " << quota << ")";
  return os.str();
}

ResourceConfig ResourceConfig::FromPoint(const ConfigPoint& point) {
  return ResourceConfig{point.sm_partition, point.quota, point.quota, 0};
}

void ResourceConfig::Validate() const {
  if (!(sm_partition > 0.0 && sm_partition <= 100.0)) {
    throw Error(ErrorCode::kValidation, "sm_partition must be in (0, 100]");
  }
  if (!(quota_request > 0.0 && quota_request <= 1.0)) {
    throw Error(ErrorCode::kValidation, "quota_request must be in (0, 1]");
  }
  if (!(quota_limit > 0.0 && quota_limit <= 1.0)) {
    throw Error(ErrorCode::kValidation, "quota_limit must be in (0, 1]");
  }
  if (quota_request > quota_limit) {
    throw Error(ErrorCode::kValidation,
                "quota_request must not exceed quota_limit");
  }
  if (gpu_mem_bytes < 0) {
    throw Error(ErrorCode::kValidation, "gpu_mem must be non-negative");
  }
}

int ToPercentUnits(double percent) {
  const double nearest = std::round(percent);
  if (std::abs(percent - nearest) <= 1e-6) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(percent));
}

}  // namespace gshare
