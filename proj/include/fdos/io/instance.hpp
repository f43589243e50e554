// Copyright 2026 The fdos-pon Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON instance files:
//
//   {"num_onus": 3, "num_slots": 3, "first_slot": 1,
//    "windows": [{"forced": 1}, {"lb": 1, "ub": 3}, ...],
//    "weights": [1, 2, 1], "W": 1000}
//
// `first_slot`, `weights` (per-ONU w_i, slot weight is j * w_i) and `W` are
// optional. Windows may reach outside the slot range or be empty; such ONUs
// surface as input errors when solved, not as parse errors.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdos/errors.hpp"
#include "fdos/instance_gen.hpp"
#include "fdos/windows.hpp"
#include "json.hpp"

namespace fdos::io {

struct InstanceFile {
  int num_onus = 0;
  int num_slots = 0;
  int first_slot = 1;
  std::vector<SlotInterval> windows;
  std::vector<std::int64_t> weights;  // empty: all ones
  std::optional<std::int64_t> big_weight;

  static InstanceFile from(const GeneratedInstance& g) {
    InstanceFile f;
    f.num_onus = static_cast<int>(g.windows.size());
    f.num_slots = g.num_slots;
    f.first_slot = g.first_slot;
    f.windows = g.windows;
    f.weights = g.onu_weight;
    return f;
  }

  AssignmentProblem problem() const {
    ProblemOptions opt;
    opt.onu_weight = weights;
    opt.big_weight = big_weight;
    return problem_from_intervals(windows, first_slot, num_slots, opt);
  }

  friend bool operator==(const InstanceFile& a, const InstanceFile& b) {
    if (a.windows.size() != b.windows.size()) return false;
    for (std::size_t i = 0; i < a.windows.size(); ++i)
      if (a.windows[i].lb != b.windows[i].lb || a.windows[i].ub != b.windows[i].ub ||
          a.windows[i].forced != b.windows[i].forced)
        return false;
    return a.num_onus == b.num_onus && a.num_slots == b.num_slots && a.first_slot == b.first_slot &&
           a.weights == b.weights && a.big_weight == b.big_weight;
  }
};

namespace detail {

using Json = nlohmann::ordered_json;

inline const Json& field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object", where);
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError("missing field '" + where + name + "'", where + name);
  return *it;
}

inline std::int64_t as_int(const Json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ParseError("field '" + name + "' must be an integer", name);
  return v.get<std::int64_t>();
}

}  // namespace detail

inline std::string to_json(const InstanceFile& f) {
  detail::Json j;
  j["num_onus"] = f.num_onus;
  j["num_slots"] = f.num_slots;
  j["first_slot"] = f.first_slot;
  detail::Json ws = detail::Json::array();
  for (const auto& w : f.windows) {
    detail::Json o;
    if (w.forced) {
      o["forced"] = w.lb;
    } else {
      o["lb"] = w.lb;
      o["ub"] = w.ub;
    }
    ws.push_back(o);
  }
  j["windows"] = ws;
  if (!f.weights.empty()) j["weights"] = f.weights;
  if (f.big_weight) j["W"] = *f.big_weight;
  return j.dump(2) + "\n";
}

inline InstanceFile parse_instance(const std::string& text) {
  detail::Json j;
  try {
    j = detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "", 0);
  }
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  static const char* known[] = {"num_onus", "num_slots", "first_slot", "windows", "weights", "W"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError("unknown field '" + it.key() + "'", it.key());
  }
  InstanceFile f;
  f.num_onus = static_cast<int>(detail::as_int(detail::field(j, "num_onus", ""), "num_onus"));
  f.num_slots = static_cast<int>(detail::as_int(detail::field(j, "num_slots", ""), "num_slots"));
  if (j.contains("first_slot")) f.first_slot = static_cast<int>(detail::as_int(j["first_slot"], "first_slot"));
  if (f.num_onus < 1) throw ParseError("field 'num_onus' must be >= 1", "num_onus");
  if (f.num_slots < 1) throw ParseError("field 'num_slots' must be >= 1", "num_slots");
  if (f.first_slot < 1) throw ParseError("field 'first_slot' must be >= 1", "first_slot");
  const auto& ws = detail::field(j, "windows", "");
  if (!ws.is_array()) throw ParseError("field 'windows' must be an array", "windows");
  if (static_cast<int>(ws.size()) != f.num_onus)
    throw ParseError("field 'windows' must have num_onus entries", "windows");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const std::string where = "windows[" + std::to_string(i) + "].";
    const auto& w = ws[i];
    if (!w.is_object()) throw ParseError("field '" + where.substr(0, where.size() - 1) + "' must be an object", where);
    if (w.contains("forced")) {
      if (w.size() != 1) throw ParseError("forced window takes no other keys", where + "forced");
      const int s = static_cast<int>(detail::as_int(w["forced"], where + "forced"));
      f.windows.push_back({s, s, true});
    } else {
      const int lb = static_cast<int>(detail::as_int(detail::field(w, "lb", where), where + "lb"));
      const int ub = static_cast<int>(detail::as_int(detail::field(w, "ub", where), where + "ub"));
      if (w.size() != 2) throw ParseError("range window takes exactly lb and ub", where);
      f.windows.push_back({lb, ub, false});
    }
  }
  if (j.contains("weights")) {
    const auto& w = j["weights"];
    if (!w.is_array() || static_cast<int>(w.size()) != f.num_onus)
      throw ParseError("field 'weights' must be an array of num_onus integers", "weights");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto v = detail::as_int(w[i], "weights[" + std::to_string(i) + "]");
      if (v < 1) throw ParseError("weights must be >= 1", "weights[" + std::to_string(i) + "]");
      f.weights.push_back(v);
    }
  }
  if (j.contains("W")) f.big_weight = detail::as_int(j["W"], "W");
  return f;
}

}  // namespace fdos::io
