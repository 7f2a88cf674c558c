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

#ifndef GSHARE_SIMULATOR_H_
#define GSHARE_SIMULATOR_H_

#include <iosfwd>

#include "gshare/metrics.h"
#include "gshare/profiles.h"
#include "gshare/scenario.h"

namespace gshare {

struct SimOptions {
  Policy policy = Policy::kSpatioTemporal;
  // Keep a RequestTiming for every completed request.
  bool record_requests = false;
  // When set, receives one JSON line per GPU per window with the token
  // table, and one per scaling epoch with the decisions taken.
  std::ostream* debug = nullptr;
};

// The profile a policy schedules with. Time sharing moves every entry to
// 100% SM, keeping the best throughput per quota.
FunctionProfile PolicyProfile(const FunctionProfile& profile, Policy policy);

// Deterministic discrete-event run of `scenario`. Per scaling epoch the
// autoscaler sizes each function from predicted demand, removed pods are
// released and new pods are placed largest first. Each window is cut into
// token quanta; pods holding a token serve their function's FIFO queue at
// the full-quota rate of their SM share.
// Throws Error(kValidation) for invalid scenarios before simulating.
MetricsReport Run(const Scenario& scenario, const SimOptions& options = {});

struct PolicyComparison {
  MetricsReport spatio_temporal;
  MetricsReport time_sharing;
};

// Same scenario and seed under both policies.
PolicyComparison ComparePolicies(const Scenario& scenario);

// Side-by-side text table of the headline numbers.
std::string ComparisonTable(const PolicyComparison& comparison);

}  // namespace gshare

#endif  // GSHARE_SIMULATOR_H_
