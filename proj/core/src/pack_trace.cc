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

#include "gshare/pack_trace.h"

#include <array>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gshare/errors.h"

namespace gshare {
namespace {

using nlohmann::json;

PackEvent ParseEvent(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw ParseError(line, "event must be an object");
  auto op = obj.find("op");
  if (op == obj.end() || !op->is_string()) {
    throw ParseError(line, "event needs a string 'op'");
  }
  auto get_string = [&](const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      throw ParseError(line, std::string("event needs a string '") + key + "'");
    }
    return it->get<std::string>();
  };
  auto get_int = [&](const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) {
      throw ParseError(line,
                       std::string("event needs an integer '") + key + "'");
    }
    return it->get<long long>();
  };

  PackEvent event;
  const std::string name = op->get<std::string>();
  if (name == "place") {
    event.op = PackOp::kPlace;
    event.pod_id = get_string("pod");
    event.function_id =
        obj.contains("function") ? get_string("function") : event.pod_id;
    event.w = static_cast<int>(get_int("w"));
    event.h = static_cast<int>(get_int("h"));
  } else if (name == "release") {
    event.op = PackOp::kRelease;
    event.pod_id = get_string("pod");
  } else if (name == "restructure") {
    event.op = PackOp::kRestructure;
    const long long threshold = get_int("threshold");
    if (threshold < 0) throw ParseError(line, "threshold must be >= 0");
    event.threshold = static_cast<std::size_t>(threshold);
  } else {
    throw ParseError(line, "unknown op '" + name + "'");
  }
  return event;
}

std::string RectJson(const Rect& r) {
  std::ostringstream os;
  os << "[" << r.x << "," << r.y << "," << r.w << "," << r.h << "]";
  return os.str();
}

}  // namespace

PackTrace ParsePackTrace(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  PackTrace trace;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return trace;

  json doc;
  bool whole = true;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    whole = false;
  }

  if (whole && doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      trace.events.push_back(ParseEvent(doc[i], i + 1));
    }
    return trace;
  }
  if (whole && doc.is_object() && doc.contains("events")) {
    if (doc.contains("gpus")) {
      if (!doc["gpus"].is_number_integer() || doc["gpus"].get<int>() < 1) {
        throw ParseError(1, "'gpus' must be a positive integer");
      }
      trace.gpus = doc["gpus"].get<int>();
    }
    if (!doc["events"].is_array())
      throw ParseError(1, "'events' must be a list");
    for (std::size_t i = 0; i < doc["events"].size(); ++i) {
      trace.events.push_back(ParseEvent(doc["events"][i], i + 1));
    }
    return trace;
  }

  // JSON lines.
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    trace.events.push_back(ParseEvent(obj, line_no));
  }
  return trace;
}

std::vector<std::string> RasterCheck(const GpuNode& node) {
  std::vector<std::string> breaches;
  std::array<std::array<int, kGpuExtent>, kGpuExtent> placed{};
  std::array<std::array<bool, kGpuExtent>, kGpuExtent> free{};
  for (const auto& [id, p] : node.placements()) {
    for (int x = p.rect.x; x < p.rect.Right(); ++x) {
      for (int y = p.rect.y; y < p.rect.Top(); ++y) ++placed[x][y];
    }
  }
  for (const auto& r : node.free_rects()) {
    for (int x = r.x; x < r.Right(); ++x) {
      for (int y = r.y; y < r.Top(); ++y) free[x][y] = true;
    }
  }
  int overlap = 0;
  int doubly_placed = 0;
  int uncovered = 0;
  for (int x = 0; x < kGpuExtent; ++x) {
    for (int y = 0; y < kGpuExtent; ++y) {
      if (placed[x][y] > 1) ++doubly_placed;
      if (placed[x][y] > 0 && free[x][y]) ++overlap;
      if (placed[x][y] == 0 && !free[x][y]) ++uncovered;
    }
  }
  if (doubly_placed) {
    breaches.push_back(std::to_string(doubly_placed) +
                       " cells held by more than one placement");
  }
  if (overlap) {
    breaches.push_back(std::to_string(overlap) +
                       " placed cells also listed as free");
  }
  if (uncovered) {
    breaches.push_back(std::to_string(uncovered) +
                       " unplaced cells missing from the free list");
  }
  const auto& rects = node.free_rects();
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = 0; j < rects.size(); ++j) {
      if (i != j && rects[j].Contains(rects[i])) {
        breaches.push_back("free rect " + rects[i].ToString() + " inside " +
                           rects[j].ToString());
      }
    }
  }
  return breaches;
}

PackTraceResult RunPackTrace(const PackTrace& trace) {
  PackTraceResult result;
  std::vector<GpuNode> nodes;
  for (int i = 0; i < trace.gpus; ++i) nodes.emplace_back(i);

  auto state_json = [&]() {
    std::string s = "[";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      s += (i ? "," : "") + nodes[i].DebugDump();
    }
    return s + "]";
  };
  auto oracle_json = [&]() {
    std::vector<std::string> all;
    for (const auto& node : nodes) {
      for (auto& b : RasterCheck(node)) {
        all.push_back("gpu " + std::to_string(node.gpu_id()) + ": " + b);
      }
    }
    if (all.empty()) return std::string("\"ok\"");
    ++result.breaches;
    return json(all).dump();
  };

  result.lines.push_back("{\"step\":0,\"event\":\"init\",\"gpus\":" +
                         state_json() + ",\"oracle\":" + oracle_json() + "}");

  for (std::size_t step = 0; step < trace.events.size(); ++step) {
    const PackEvent& ev = trace.events[step];
    json event_json;
    std::string status = "ok";
    std::string detail;
    try {
      switch (ev.op) {
        case PackOp::kPlace: {
          event_json = {{"op", "place"},
                        {"pod", ev.pod_id},
                        {"function", ev.function_id},
                        {"w", ev.w},
                        {"h", ev.h}};
          PodRequest req{ev.pod_id, ev.function_id, ev.w, ev.h};
          req.Validate();
          for (const auto& node : nodes) {
            if (node.placements().contains(ev.pod_id)) {
              throw Error(ErrorCode::kConflict,
                          "pod '" + ev.pod_id + "' is already placed");
            }
          }
          // Occupied GPUs first; idle GPUs only when nothing fits.
          std::vector<GpuNode> busy;
          std::vector<std::size_t> busy_index;
          for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!nodes[i].empty()) {
              busy.push_back(nodes[i]);
              busy_index.push_back(i);
            }
          }
          std::optional<std::size_t> target;
          std::optional<Rect> rect;
          if (auto m = BestMatch(busy, req)) {
            target = busy_index[m->node_index];
            rect = m->rect;
          } else {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
              if (nodes[i].empty()) {
                nodes[i].Restructure(0);
                if (auto m2 = BestMatch(std::span<const GpuNode>(&nodes[i], 1),
                                        req)) {
                  target = i;
                  rect = m2->rect;
                }
                break;
              }
            }
          }
          if (!target) {
            status = "infeasible";
            detail = "no free rectangle fits and no idle GPU remains";
            ++result.infeasible;
          } else {
            const Rect placed = nodes[*target].Place(*rect, req);
            detail = "gpu " + std::to_string(nodes[*target].gpu_id()) + " at " +
                     RectJson(placed);
          }
          break;
        }
        case PackOp::kRelease: {
          event_json = {{"op", "release"}, {"pod", ev.pod_id}};
          bool found = false;
          for (auto& node : nodes) {
            if (node.placements().contains(ev.pod_id)) {
              node.Release(ev.pod_id);
              found = true;
              break;
            }
          }
          if (!found) {
            throw Error(ErrorCode::kNotFound,
                        "pod '" + ev.pod_id + "' is not placed");
          }
          break;
        }
        case PackOp::kRestructure: {
          event_json = {{"op", "restructure"}, {"threshold", ev.threshold}};
          std::string outcomes;
          for (auto& node : nodes) {
            const auto outcome = node.Restructure(ev.threshold);
            outcomes += (outcomes.empty() ? "" : ", ") + std::string("gpu ") +
                        std::to_string(node.gpu_id()) + ": " +
                        (outcome == RestructureOutcome::kNoop      ? "noop"
                         : outcome == RestructureOutcome::kRebuilt ? "rebuilt"
                                                                   : "aborted");
          }
          detail = outcomes;
          break;
        }
      }
    } catch (const Error& e) {
      status = "error";
      detail = e.what();
      ++result.errors;
    }
    result.lines.push_back(
        "{\"step\":" + std::to_string(step + 1) +
        ",\"event\":" + event_json.dump() + ",\"status\":\"" + status +
        "\",\"detail\":" + json(detail).dump() + ",\"gpus\":" + state_json() +
        ",\"oracle\":" + oracle_json() + "}");
  }
  return result;
}

}  // namespace gshare
