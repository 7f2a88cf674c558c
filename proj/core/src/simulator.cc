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

#include "gshare/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "gshare/autoscaler.h"
#include "gshare/errors.h"
#include "gshare/packer.h"
#include "gshare/token_backend.h"

namespace gshare {
namespace {

constexpr double kTimeEpsilon = 1e-12;

struct Request {
  std::uint64_t id = 0;
  double arrival_s = 0.0;
};

struct SimPod {
  PodId id;
  std::size_t function = 0;
  ConfigPoint point;
  double active_sm = 0.0;
  double rate = 0.0;
  std::size_t gpu = 0;
  int ready_window = 0;

  bool busy = false;
  Request current;
  double current_start_s = 0.0;
  double remaining_s = 0.0;
};

struct PolicyView {
  FunctionProfile profile;
  // Allocated point -> point whose throughput and SM footprint it inherits.
  std::map<ConfigPoint, ConfigPoint> natural;
};

PolicyView MakePolicyView(const FunctionProfile& profile, Policy policy) {
  if (policy == Policy::kSpatioTemporal) {
    PolicyView view{profile, {}};
    for (const auto& e : profile.entries()) view.natural[e.point] = e.point;
    return view;
  }
  std::map<double, const ProfileEntry*> best;
  for (const auto& e : profile.entries()) {
    auto [it, inserted] = best.emplace(e.point.quota, &e);
    // Entries are visited in ascending SM order, so ties keep the smaller SM.
    if (!inserted && e.throughput_rps > it->second->throughput_rps) {
      it->second = &e;
    }
  }
  std::vector<ProfileEntry> entries;
  std::map<ConfigPoint, ConfigPoint> natural;
  for (const auto& [quota, e] : best) {
    const ConfigPoint full{kSmGlobalLimit, quota};
    entries.push_back(ProfileEntry{full, e->throughput_rps, e->p99_latency_ms});
    natural[full] = e->point;
  }
  return PolicyView{
      FunctionProfile(profile.function_id(), profile.slo_latency_ms(),
                      profile.memory(), std::move(entries)),
      std::move(natural)};
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::mt19937_64 rng(seq);
  return rng();
}

struct Interval {
  double begin;
  double end;
};

double UnionLength(std::vector<Interval>& intervals) {
  std::sort(
      intervals.begin(), intervals.end(),
      [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  double total = 0.0;
  double cur_begin = 0.0;
  double cur_end = -1.0;
  bool open = false;
  for (const auto& iv : intervals) {
    if (!open || iv.begin > cur_end) {
      if (open) total += cur_end - cur_begin;
      cur_begin = iv.begin;
      cur_end = iv.end;
      open = true;
    } else {
      cur_end = std::max(cur_end, iv.end);
    }
  }
  if (open) total += cur_end - cur_begin;
  return total;
}

std::string PadId(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05llu", static_cast<unsigned long long>(n));
  return buf;
}

class Simulation {
 public:
  Simulation(const Scenario& scenario, const SimOptions& options)
      : scenario_(scenario),
        options_(options),
        window_s_(scenario.window_s()),
        predictor_(scenario.predictor_windows) {
    for (int i = 0; i < scenario_.fleet_size; ++i) {
      nodes_.emplace_back(i, scenario_.gpu_memory_mb);
      backends_.emplace_back(
          BackendOptions{scenario_.window_ms, scenario_.quantum});
      gpu_busy_.emplace_back();
    }
    for (std::size_t fi = 0; fi < scenario_.functions.size(); ++fi) {
      const FunctionSpec& spec = scenario_.functions[fi];
      catalog_[spec.profile.function_id()] = spec.profile.memory();
      functions_.push_back(FunctionState{
          &spec,
          MakePolicyView(spec.profile, options_.policy),
          RunningSet(spec.profile.function_id()),
          GenerateCounts(spec.workload, scenario_.windows, window_s_,
                         DeriveSeed(scenario_.seed, fi, 0xC0u)),
          {},
          {},
          0,
          {},
          {},
          0});
      functions_.back().summary.function_id = spec.profile.function_id();
    }
  }

  MetricsReport Run() {
    for (int w = 0; w < scenario_.windows; ++w) {
      if (w % scenario_.epoch_windows == 0) ScalingEpoch(w);
      RunWindow(w);
    }
    Finish();
    return std::move(report_);
  }

 private:
  struct FunctionState {
    const FunctionSpec* spec;
    PolicyView view;
    RunningSet running;
    std::vector<std::int64_t> counts;
    std::deque<Request> queue;
    std::vector<Request> incoming;
    std::size_t incoming_next = 0;
    FunctionWindowMetrics window;
    FunctionSummary summary;
    std::uint64_t next_pod = 0;
  };

  struct PendingAdd {
    std::size_t function;
    ConfigPoint point;
    std::int64_t area;
  };

  struct Slot {
    SimPod* pod;
    TokenId token;
    double duration;
    double cursor;
    double end;
    double busy = 0.0;
  };

  void ScalingEpoch(int w) {
    std::vector<PendingAdd> adds;
    nlohmann::json log = nlohmann::json::array();
    for (std::size_t fi = 0; fi < functions_.size(); ++fi) {
      FunctionState& fs = functions_[fi];
      std::vector<double> history;
      const int k = scenario_.predictor_windows;
      for (int j = std::max(0, w - k); j < w; ++j) {
        history.push_back(static_cast<double>(fs.counts[j]) / window_s_);
      }
      // Bootstrap from the load the gateway sees when the run starts.
      if (history.empty()) {
        history.push_back(static_cast<double>(fs.counts[w]) / window_s_);
      }
      double demand = predictor_.Predict(history);
      if (scenario_.backlog_drain) {
        demand += static_cast<double>(Backlog(fi)) /
                  (scenario_.epoch_windows * window_s_);
      }
      const auto decisions =
          Autoscale(fs.view.profile, fs.running,
                    DemandEstimate{fs.view.profile.function_id(), demand});
      for (const auto& d : decisions) {
        if (d.action == ScalingAction::kRemove) {
          RemovePod(d.pod_id);
        } else {
          const PodRequest req =
              PodRequest::FromConfig("", fs.view.profile.function_id(),
                                     ResourceConfig::FromPoint(d.point));
          adds.push_back(PendingAdd{fi, d.point, req.Area()});
        }
        if (options_.debug != nullptr) {
          log.push_back(
              {{"function", d.function_id},
               {"action", d.action == ScalingAction::kAdd ? "add" : "remove"},
               {"sm", d.point.sm_partition},
               {"quota", d.point.quota},
               {"pod", d.pod_id}});
        }
      }
    }
    for (auto& node : nodes_) node.Restructure(scenario_.restructure_threshold);
    std::stable_sort(adds.begin(), adds.end(),
                     [](const PendingAdd& a, const PendingAdd& b) {
                       return a.area > b.area;
                     });
    for (const auto& add : adds) PlacePod(w, add);
    if (options_.debug != nullptr) {
      *options_.debug
          << nlohmann::json{{"window", w}, {"epoch_decisions", log}}.dump()
          << "\n";
    }
  }

  std::int64_t Backlog(std::size_t fi) const {
    std::int64_t n = static_cast<std::int64_t>(functions_[fi].queue.size());
    for (const auto& [id, pod] : pods_) {
      if (pod.function == fi && pod.busy) ++n;
    }
    return n;
  }

  void RemovePod(const PodId& id) {
    auto it = pods_.find(id);
    if (it == pods_.end()) {
      throw Error(ErrorCode::kInvariant, "scale-down of unknown pod " + id);
    }
    SimPod& pod = it->second;
    FunctionState& fs = functions_[pod.function];
    if (pod.busy) {
      // The interrupted request goes back in arrival order and restarts.
      auto pos = std::upper_bound(fs.queue.begin(), fs.queue.end(), pod.current,
                                  [](const Request& a, const Request& b) {
                                    if (a.arrival_s != b.arrival_s)
                                      return a.arrival_s < b.arrival_s;
                                    return a.id < b.id;
                                  });
      fs.queue.insert(pos, pod.current);
    }
    nodes_[pod.gpu].Release(id);
    backends_[pod.gpu].UnregisterPod(id);
    fs.running.Remove(id);
    pods_.erase(it);
  }

  void PlacePod(int w, const PendingAdd& add) {
    FunctionState& fs = functions_[add.function];
    const FunctionId& fid = fs.view.profile.function_id();
    const ResourceConfig config = ResourceConfig::FromPoint(add.point);
    const PodId pod_id = fid + "-" + PadId(fs.next_pod++);
    const PodRequest req = PodRequest::FromConfig(pod_id, fid, config);

    // Idle GPUs hold a single full rect, the worst possible fit, so they are
    // only chosen when no occupied GPU can host the pod.
    const auto match =
        BestMatch(nodes_, req, MemoryAdmission{&catalog_, scenario_.sharing});
    if (!match) {
      ++placement_failures_;
      return;
    }
    nodes_[match->node_index].Place(match->rect, req);
    backends_[match->node_index].RegisterPod(pod_id, config);

    const ConfigPoint natural = fs.view.natural.at(add.point);
    SimPod pod;
    pod.id = pod_id;
    pod.function = add.function;
    pod.point = add.point;
    pod.active_sm = natural.sm_partition;
    pod.rate = FullQuotaRate(fs.spec->profile, natural);
    pod.gpu = match->node_index;
    pod.ready_window = w + scenario_.cold_start_windows;
    fs.running.Push(RunningPod{pod_id, add.point,
                               ThroughputAt(fs.view.profile, add.point)});
    pods_.emplace(pod_id, std::move(pod));
  }

  void RunWindow(int w) {
    const double t0 = w * window_s_;
    for (auto& backend : backends_) backend.ResetWindow();
    for (auto& busy : gpu_busy_) busy = GpuAccumulator{};
    for (std::size_t fi = 0; fi < functions_.size(); ++fi) {
      FunctionState& fs = functions_[fi];
      fs.window = FunctionWindowMetrics{};
      fs.window.window = w;
      fs.window.function_id = fs.view.profile.function_id();
      fs.window.arrivals = fs.counts[w];
      fs.incoming.clear();
      fs.incoming_next = 0;
      const auto offsets =
          ArrivalOffsets(fs.counts[w], window_s_, scenario_.arrival_pattern,
                         DeriveSeed(scenario_.seed, fi, w + 1));
      for (double off : offsets) {
        fs.incoming.push_back(Request{next_request_++, t0 + off});
      }
    }

    const double q = scenario_.quantum;
    const int steps = static_cast<int>(std::ceil(1.0 / q - 1e-9));
    for (int k = 0; k < steps; ++k) {
      const double ts = t0 + std::min(k * q, 1.0) * window_s_;
      const double te = t0 + std::min((k + 1) * q, 1.0) * window_s_;
      RunStep(w, t0, ts, te);
    }
    RecordWindow(w);
  }

  void RunStep(int w, double t0, double ts, double te) {
    for (auto& fs : functions_) {
      while (fs.incoming_next < fs.incoming.size() &&
             fs.incoming[fs.incoming_next].arrival_s < te) {
        const Request& r = fs.incoming[fs.incoming_next++];
        if (fs.spec->max_queue &&
            static_cast<std::int64_t>(fs.queue.size()) >= *fs.spec->max_queue) {
          ++fs.window.dropped;
        } else {
          fs.queue.push_back(r);
        }
      }
    }

    // Pods ask for a token when they have work: every pod with a request in
    // service, plus as many idle pods as there are queued requests.
    std::set<PodId> requesting;
    for (std::size_t fi = 0; fi < functions_.size(); ++fi) {
      std::vector<const SimPod*> idle;
      for (const auto& [id, pod] : pods_) {
        if (pod.function != fi || pod.ready_window > w) continue;
        if (pod.busy) {
          requesting.insert(id);
        } else {
          idle.push_back(&pod);
        }
      }
      std::stable_sort(idle.begin(), idle.end(),
                       [this](const SimPod* a, const SimPod* b) {
                         return backends_[a->gpu].pod(a->id).QMiss() >
                                backends_[b->gpu].pod(b->id).QMiss();
                       });
      const std::size_t want =
          std::min(idle.size(), functions_[fi].queue.size());
      for (std::size_t i = 0; i < want; ++i) requesting.insert(idle[i]->id);
    }

    std::vector<std::vector<Slot>> slots(functions_.size());
    for (std::size_t g = 0; g < backends_.size(); ++g) {
      BackendTable& backend = backends_[g];
      if (backend.pods().empty()) continue;
      std::vector<PodId> candidates;
      for (auto& id : backend.Filter().candidates) {
        if (requesting.contains(id)) candidates.push_back(std::move(id));
      }
      if (candidates.empty()) continue;
      const auto tokens =
          backend.Dispatch(backend.Enqueue(candidates), (ts - t0) / window_s_);
      for (const auto& token : tokens) {
        SimPod& pod = pods_.at(token.pod_id);
        const double end = std::min(ts + token.duration * window_s_, te);
        slots[pod.function].push_back(
            Slot{&pod, token.id, token.duration, ts, end});
      }
    }

    for (std::size_t fi = 0; fi < functions_.size(); ++fi) {
      auto& fn_slots = slots[fi];
      std::sort(
          fn_slots.begin(), fn_slots.end(),
          [](const Slot& a, const Slot& b) { return a.pod->id < b.pod->id; });
      Serve(w, fi, fn_slots);
      for (const auto& slot : fn_slots) {
        backends_[slot.pod->gpu].CompleteToken(
            slot.token, std::min(slot.busy / window_s_, slot.duration));
      }
    }
  }

  void Busy(Slot& slot, double begin, double end) {
    if (end <= begin) return;
    slot.busy += end - begin;
    GpuAccumulator& acc = gpu_busy_[slot.pod->gpu];
    acc.intervals.push_back(Interval{begin, end});
    acc.sm_seconds += slot.pod->active_sm * (end - begin);
  }

  void Complete(int w, std::size_t fi, const Request& r, double start,
                double finish) {
    FunctionState& fs = functions_[fi];
    ++fs.window.completions;
    const double latency_ms = (finish - r.arrival_s) * 1000.0;
    if (latency_ms > fs.view.profile.slo_latency_ms() + 1e-9) {
      ++fs.window.slo_violations;
    }
    if (options_.record_requests) {
      report_.requests.push_back(RequestTiming{fs.view.profile.function_id(),
                                               r.arrival_s, start, finish});
    }
    (void)w;
  }

  // FCFS service of the function queue by the pods holding tokens this step.
  void Serve(int w, std::size_t fi, std::vector<Slot>& fn_slots) {
    FunctionState& fs = functions_[fi];
    for (auto& slot : fn_slots) {
      SimPod& pod = *slot.pod;
      if (!pod.busy) continue;
      const double run = std::min(pod.remaining_s, slot.end - slot.cursor);
      Busy(slot, slot.cursor, slot.cursor + run);
      slot.cursor += run;
      pod.remaining_s -= run;
      if (pod.remaining_s <= kTimeEpsilon) {
        pod.busy = false;
        Complete(w, fi, pod.current, pod.current_start_s, slot.cursor);
      }
    }
    while (!fs.queue.empty()) {
      const Request head = fs.queue.front();
      Slot* best = nullptr;
      double best_start = 0.0;
      for (auto& slot : fn_slots) {
        if (slot.pod->busy) continue;
        const double start = std::max(slot.cursor, head.arrival_s);
        if (start >= slot.end - kTimeEpsilon) continue;
        if (best == nullptr || start < best_start) {
          best = &slot;
          best_start = start;
        }
      }
      if (best == nullptr) break;
      fs.queue.pop_front();
      SimPod& pod = *best->pod;
      const double finish = best_start + 1.0 / pod.rate;
      if (finish <= best->end + kTimeEpsilon) {
        Busy(*best, best_start, finish);
        best->cursor = finish;
        Complete(w, fi, head, best_start, finish);
      } else {
        Busy(*best, best_start, best->end);
        best->cursor = best->end;
        pod.busy = true;
        pod.current = head;
        pod.current_start_s = best_start;
        pod.remaining_s = finish - best->end;
      }
    }
  }

  void RecordWindow(int w) {
    for (std::size_t fi = 0; fi < functions_.size(); ++fi) {
      FunctionState& fs = functions_[fi];
      fs.window.queue_depth = Backlog(fi);
      fs.window.pods = static_cast<int>(fs.running.size());
      report_.function_windows.push_back(fs.window);
      FunctionSummary& s = fs.summary;
      s.arrivals += fs.window.arrivals;
      s.completions += fs.window.completions;
      s.slo_violations += fs.window.slo_violations;
      s.dropped += fs.window.dropped;
      s.final_queue_depth = fs.window.queue_depth;
      s.peak_pods = std::max(s.peak_pods, fs.window.pods);
    }

    ClusterWindowMetrics cluster;
    cluster.window = w;
    double fragmentation = 0.0;
    for (std::size_t g = 0; g < nodes_.size(); ++g) {
      const GpuNode& node = nodes_[g];
      if (node.empty()) continue;
      GpuWindowMetrics m;
      m.window = w;
      m.gpu_id = node.gpu_id();
      m.pods = static_cast<int>(node.placements().size());
      m.utilization =
          std::min(1.0, UnionLength(gpu_busy_[g].intervals) / window_s_);
      m.sm_occupancy =
          std::min(1.0, gpu_busy_[g].sm_seconds / (kSmGlobalLimit * window_s_));
      m.memory_mb = Footprint(node.memory(), catalog_, scenario_.sharing);
      m.fragmentation = node.FragmentationIndex();
      fragmentation += m.fragmentation;
      ++cluster.gpus_in_use;
      report_.gpu_windows.push_back(m);
      if (options_.debug != nullptr) {
        *options_.debug << "{\"window\":" << w << ",\"gpu\":" << node.gpu_id()
                        << ",\"table\":" << backends_[g].DebugDump() << "}\n";
      }
    }
    cluster.placement_failures = placement_failures_;
    if (cluster.gpus_in_use > 0) {
      cluster.fragmentation = fragmentation / cluster.gpus_in_use;
    }
    report_.cluster_windows.push_back(cluster);
  }

  void Finish() {
    MetricsSummary& s = report_.summary;
    s.policy = options_.policy;
    s.windows = scenario_.windows;
    s.placement_failures = placement_failures_;
    for (const auto& c : report_.cluster_windows) {
      s.gpus_used = std::max(s.gpus_used, c.gpus_in_use);
    }
    if (!report_.gpu_windows.empty()) {
      double util = 0.0;
      double occ = 0.0;
      for (const auto& g : report_.gpu_windows) {
        util += g.utilization;
        occ += g.sm_occupancy;
      }
      s.mean_utilization = util / report_.gpu_windows.size();
      s.mean_sm_occupancy = occ / report_.gpu_windows.size();
    }
    std::int64_t completions = 0;
    std::int64_t violations = 0;
    for (auto& fs : functions_) {
      FunctionSummary f = fs.summary;
      if (f.completions > 0) {
        f.slo_violation_pct = 100.0 * f.slo_violations / f.completions;
      }
      completions += f.completions;
      violations += f.slo_violations;
      s.functions.push_back(std::move(f));
    }
    if (completions > 0) {
      s.slo_violation_pct = 100.0 * violations / completions;
    }
  }

  struct GpuAccumulator {
    std::vector<Interval> intervals;
    double sm_seconds = 0.0;
  };

  const Scenario& scenario_;
  SimOptions options_;
  double window_s_;
  MaxRecentPredictor predictor_;
  MemoryCatalog catalog_;
  std::vector<GpuNode> nodes_;
  std::vector<BackendTable> backends_;
  std::vector<GpuAccumulator> gpu_busy_;
  std::vector<FunctionState> functions_;
  std::map<PodId, SimPod> pods_;
  std::int64_t placement_failures_ = 0;
  std::uint64_t next_request_ = 0;
  MetricsReport report_;
};

}  // namespace

FunctionProfile PolicyProfile(const FunctionProfile& profile, Policy policy) {
  return MakePolicyView(profile, policy).profile;
}

MetricsReport Run(const Scenario& scenario, const SimOptions& options) {
  scenario.Validate();
  return Simulation(scenario, options).Run();
}

PolicyComparison ComparePolicies(const Scenario& scenario) {
  SimOptions fast;
  fast.policy = Policy::kSpatioTemporal;
  SimOptions timeshare;
  timeshare.policy = Policy::kTimeSharing;
  return PolicyComparison{Run(scenario, fast), Run(scenario, timeshare)};
}

std::string ComparisonTable(const PolicyComparison& comparison) {
  const auto& a = comparison.spatio_temporal.summary;
  const auto& b = comparison.time_sharing.summary;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%-22s %14s %14s\n"
                "%-22s %14d %14d\n"
                "%-22s %14.4f %14.4f\n"
                "%-22s %14.4f %14.4f\n"
                "%-22s %14.4f %14.4f\n"
                "%-22s %14lld %14lld\n",
                "metric", "fast", "timeshare", "gpus_used", a.gpus_used,
                b.gpus_used, "mean_utilization", a.mean_utilization,
                b.mean_utilization, "mean_sm_occupancy", a.mean_sm_occupancy,
                b.mean_sm_occupancy, "slo_violation_pct", a.slo_violation_pct,
                b.slo_violation_pct, "placement_failures",
                static_cast<long long>(a.placement_failures),
                static_cast<long long>(b.placement_failures));
  return buf;
}

}  // namespace gshare
