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

#include "gshare/workload.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "gshare/errors.h"

namespace gshare {

void WorkloadSpec::Validate() const {
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  switch (kind) {
    case WorkloadKind::kCounts:
    case WorkloadKind::kReplay:
      for (auto c : counts) {
        if (c < 0) {
          throw Error(ErrorCode::kValidation, "arrival counts must be >= 0");
        }
      }
      break;
    case WorkloadKind::kConstant:
      if (bad(rps)) throw Error(ErrorCode::kValidation, "rps must be >= 0");
      break;
    case WorkloadKind::kStep:
      if (bad(rps) || bad(step_rps) || step_window < 0) {
        throw Error(ErrorCode::kValidation,
                    "step workload needs rps, step_rps >= 0 and window >= 0");
      }
      break;
    case WorkloadKind::kSinusoid:
      if (bad(rps) || bad(amplitude_rps) || !(period_windows > 0.0)) {
        throw Error(ErrorCode::kValidation,
                    "sinusoid needs mean, amplitude >= 0 and period > 0");
      }
      break;
  }
}

double OfferedRps(const WorkloadSpec& spec, int window) {
  switch (spec.kind) {
    case WorkloadKind::kCounts:
    case WorkloadKind::kReplay:
      return 0.0;
    case WorkloadKind::kConstant:
      return spec.rps;
    case WorkloadKind::kStep:
      return window < spec.step_window ? spec.rps : spec.step_rps;
    case WorkloadKind::kSinusoid:
      return std::max(
          0.0, spec.rps +
                   spec.amplitude_rps * std::sin(2.0 * std::numbers::pi *
                                                 window / spec.period_windows));
  }
  return 0.0;
}

std::vector<std::int64_t> GenerateCounts(const WorkloadSpec& spec, int windows,
                                         double window_s, std::uint64_t seed) {
  spec.Validate();
  std::vector<std::int64_t> counts(std::max(windows, 0), 0);
  if (spec.kind == WorkloadKind::kCounts ||
      spec.kind == WorkloadKind::kReplay) {
    const std::size_t n = std::min(counts.size(), spec.counts.size());
    std::copy_n(spec.counts.begin(), n, counts.begin());
    return counts;
  }
  std::mt19937_64 rng(seed);
  double carry = 0.0;
  for (int w = 0; w < windows; ++w) {
    const double expected = OfferedRps(spec, w) * window_s;
    if (spec.poisson) {
      if (expected > 0.0) {
        std::poisson_distribution<std::int64_t> dist(expected);
        counts[w] = dist(rng);
      }
      continue;
    }
    const double total = expected + carry;
    // Tolerate representation error so 10.0 * 1.0 never rounds down to 9.
    const auto whole = static_cast<std::int64_t>(std::floor(total + 1e-9));
    counts[w] = std::max<std::int64_t>(whole, 0);
    carry = total - static_cast<double>(counts[w]);
  }
  return counts;
}

std::vector<std::int64_t> LoadReplayCounts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open '" + path + "'");
  std::vector<std::int64_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(line.substr(first), &used);
    } catch (const std::exception&) {
      throw ParseError(line_no, "expected an integer count");
    }
    if (line.find_first_not_of(" \t\r", first + used) != std::string::npos ||
        value < 0) {
      throw ParseError(line_no, "expected a non-negative integer count");
    }
    counts.push_back(value);
  }
  return counts;
}

std::vector<double> ArrivalOffsets(std::int64_t count, double window_s,
                                   ArrivalPattern pattern, std::uint64_t seed) {
  std::vector<double> offsets;
  if (count <= 0) return offsets;
  offsets.reserve(static_cast<std::size_t>(count));
  if (pattern == ArrivalPattern::kEven) {
    for (std::int64_t i = 0; i < count; ++i) {
      offsets.push_back((static_cast<double>(i) + 0.5) * window_s /
                        static_cast<double>(count));
    }
    return offsets;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, window_s);
  for (std::int64_t i = 0; i < count; ++i) offsets.push_back(dist(rng));
  std::sort(offsets.begin(), offsets.end());
  return offsets;
}

}  // namespace gshare
