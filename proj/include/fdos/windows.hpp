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

// Feasible slot windows for sleeping ONUs. Slot j starts (j-1) max-cycle
// times after the current decision epoch; slot 0 is the cycle in flight and
// is never assignable. Every time field is relative to the epoch (t = 0), so
// past events carry negative offsets.

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fdos/model.hpp"

namespace fdos {

inline constexpr int kUnboundedSlot = std::numeric_limits<int>::max();

struct OnuScheduleState {
  int onu_id = 0;
  Duration rtt{};                               // T_rtt
  SleepMode sleep_mode = SleepMode::DeepSleep;  // S_m
  Duration last_report{};                       // t_lr, <= 0
  Duration reported_fill_time{};                // T_BU
  std::optional<Duration> ds_fill_time;         // T_BD, absent when DS is not modelled
  std::optional<Duration> wake_sent;            // t_w, present for ONUs already woken
  std::optional<Duration> last_gate;            // t_lg
  Duration min_sleep_threshold{};               // T_lb for sleep_mode
};

struct WindowConfig {
  Duration max_cycle = from_ms(2);   // T_cm
  Duration dereg_time = from_ms(50); // T_dr
  PowerProfile power = PowerProfile::defaults();
};

namespace detail {

inline int clamp_slot(std::int64_t v) {
  if (v > kUnboundedSlot - 1) return kUnboundedSlot - 1;
  if (v < std::numeric_limits<int>::min() / 2) return std::numeric_limits<int>::min() / 2;
  return static_cast<int>(v);
}

inline int raw_ub_us(const OnuScheduleState& s, Duration t_cm) {
  return clamp_slot(floor_div(s.last_report + s.reported_fill_time - 2 * t_cm, t_cm) + 1);
}

inline int raw_ub_dereg(const OnuScheduleState& s, Duration t_cm, Duration t_dr) {
  return clamp_slot(floor_div(s.last_report + t_dr, t_cm) + 1);
}

}  // namespace detail

// Slot pinned by a wake-up message already sent at t_w.
inline int forced_slot(const OnuScheduleState& s, const WindowConfig& cfg) {
  if (!s.wake_sent) throw PreconditionError("forced_slot requires a sent wake-up message");
  const Duration t_sw = cfg.power.wake(s.sleep_mode);
  if (s.last_gate && *s.wake_sent + t_sw < *s.last_gate) return 1;
  const auto v = ceil_div(*s.wake_sent + s.rtt + t_sw, cfg.max_cycle) + 1;
  return std::max(1, detail::clamp_slot(v));
}

// Last slot that still avoids an upstream buffer overflow.
inline int ub_us(const OnuScheduleState& s, Duration t_cm) {
  const int ub = detail::raw_ub_us(s, t_cm);
  if (ub < 1) throw InfeasibleWindow(s.onu_id, 1, ub);
  return ub;
}

// Downstream buffer bound; unbounded when downstream is not modelled.
inline int ub_ds(const OnuScheduleState& s, Duration t_cm) {
  if (!s.ds_fill_time) return kUnboundedSlot;
  return detail::clamp_slot(floor_div(*s.ds_fill_time, t_cm) + 1);
}

// Last slot in which a REPORT still reaches the OLT before deregistration.
inline int ub_dereg(const OnuScheduleState& s, Duration t_cm, Duration t_dr) {
  const int ub = detail::raw_ub_dereg(s, t_cm, t_dr);
  if (ub < 1) throw InfeasibleWindow(s.onu_id, 1, ub);
  return ub;
}

// Earliest slot reachable if the wake-up message were sent now.
inline int lb_present(const OnuScheduleState& s, const WindowConfig& cfg) {
  const Duration t_sw = cfg.power.wake(s.sleep_mode);
  return std::max(1, detail::clamp_slot(ceil_div(s.rtt + t_sw, cfg.max_cycle) + 1));
}

// Earliest slot that keeps the ONU asleep long enough to pay off its sleep mode.
inline int lb_min_sleep(const OnuScheduleState& s, Duration t_cm) {
  const auto v = ceil_div(s.last_report + s.min_sleep_threshold - 2 * t_cm, t_cm) + 1;
  return std::max(1, detail::clamp_slot(v));
}

inline FeasibleWindow window(const OnuScheduleState& s, const WindowConfig& cfg) {
  if (s.wake_sent) return FeasibleWindow::forced(forced_slot(s, cfg));
  const Duration t_cm = cfg.max_cycle;
  const int lb = std::max(lb_present(s, cfg), lb_min_sleep(s, t_cm));
  const int ub = std::min({detail::raw_ub_us(s, t_cm), ub_ds(s, t_cm),
                           detail::raw_ub_dereg(s, t_cm, cfg.dereg_time)});
  if (ub < 1 || lb > ub) throw InfeasibleWindow(s.onu_id, lb, ub);
  return FeasibleWindow::range(lb, ub, s.onu_id);
}

// Optional hook to prune arcs further (e.g. delay-bound SLAs).
using ArcFilter = std::function<bool(const OnuScheduleState&, int slot)>;

struct BuiltProblem {
  std::optional<AssignmentProblem> problem;  // absent when every ONU needs an immediate wake
  std::vector<FeasibleWindow> windows;       // per problem row
  std::vector<int> immediate_wake;           // ONU ids with empty windows
};

inline BuiltProblem build_problem(const std::vector<OnuScheduleState>& states, const WindowConfig& cfg,
                                  const ArcFilter& filter = {}) {
  if (states.empty()) throw PreconditionError("build_problem needs at least one ONU");
  BuiltProblem out;
  std::vector<std::vector<int>> arcs;
  std::vector<int> ids;
  int max_slot = 0;
  for (const auto& s : states) {
    try {
      FeasibleWindow w = window(s, cfg);
      std::vector<int> a;
      for (int j = w.lb(); j <= w.ub(); ++j)
        if (!filter || w.is_forced() || filter(s, j)) a.push_back(j);
      if (a.empty()) {
        out.immediate_wake.push_back(s.onu_id);
        continue;
      }
      max_slot = std::max(max_slot, a.back());
      arcs.push_back(std::move(a));
      ids.push_back(s.onu_id);
      out.windows.push_back(w);
    } catch (const InfeasibleWindow&) {
      out.immediate_wake.push_back(s.onu_id);
    }
  }
  if (!arcs.empty()) out.problem = make_problem(contiguous_slots(1, max_slot), std::move(arcs), {}, std::move(ids));
  return out;
}

// Arc set of an instance given directly as inclusive slot intervals
// (instance files, generators). Slots are first_slot .. first_slot+num_slots-1.
struct SlotInterval {
  int lb;
  int ub;
  bool forced = false;
};

inline AssignmentProblem problem_from_intervals(const std::vector<SlotInterval>& windows, int first_slot,
                                                int num_slots, const ProblemOptions& opt = {}) {
  std::vector<std::vector<int>> arcs;
  for (const auto& w : windows) {
    std::vector<int> a;
    for (int j = std::max(w.lb, first_slot); j <= std::min(w.ub, first_slot + num_slots - 1); ++j) a.push_back(j);
    arcs.push_back(std::move(a));
  }
  return make_problem(contiguous_slots(first_slot, num_slots), std::move(arcs), opt);
}

}  // namespace fdos
