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

// Simulation parameters and the small per-decision rules shared by the OLT
// and ONU models: sleep thresholds, OSMP-EO rules, limited-scheme grant
// sizing and wake-up message timing.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdos/errors.hpp"
#include "fdos/model.hpp"
#include "fdos/traffic.hpp"

namespace fdos::sim {

enum class Scheduler { OsmpEoOnly, FdosWakeup };
enum class Predictor { Oracle, Ewma };

inline std::string_view to_string(Scheduler s) { return s == Scheduler::OsmpEoOnly ? "osmp" : "fdos"; }
inline std::string_view to_string(Predictor p) { return p == Predictor::Oracle ? "oracle" : "ewma"; }

inline Scheduler parse_scheduler(std::string_view s) {
  if (s == "osmp") return Scheduler::OsmpEoOnly;
  if (s == "fdos") return Scheduler::FdosWakeup;
  throw ValidationError("unknown scheduler '" + std::string(s) + "' (expected osmp or fdos)");
}

inline Predictor parse_predictor(std::string_view s) {
  if (s == "oracle") return Predictor::Oracle;
  if (s == "ewma") return Predictor::Ewma;
  throw ValidationError("unknown predictor '" + std::string(s) + "' (expected oracle or ewma)");
}

// Break-even sleep length above which `mode` beats the next higher-power mode
// `higher`: P_on * (T_sw(mode) - T_sw(higher)) / (P(higher) - P(mode)).
inline Duration break_even(const PowerProfile& p, SleepMode mode, SleepMode higher) {
  const double wake_ns = static_cast<double>((p.wake(mode) - p.wake(higher)).count());
  const double ns = p.power(SleepMode::Active) * wake_ns / (p.power(higher) - p.power(mode));
  return Duration(std::llround(ns));
}

struct SimConfig {
  int num_onus = 16;
  Duration max_cycle = from_ms(2);           // T_cm
  Duration default_rtt = from_us(200);
  std::vector<Duration> rtt;                 // per ONU, overrides default_rtt when non-empty
  double link_rate_bps = 1e9;
  Duration guard = from_us(1);
  int report_bytes = 64;
  std::int64_t buffer_bits = 1'200'000;
  std::int64_t threshold_bits = 1'000'000;   // B_th
  Duration dereg_time = from_ms(50);         // T_dr
  Duration decision_period = from_ms(1);     // T_m
  PowerProfile power = PowerProfile::defaults();
  std::optional<Duration> deep_threshold;    // T_lb for ds, default break-even ds vs fs
  std::optional<Duration> fast_threshold;    // T_lb for fs, default break-even fs vs dz
  Scheduler scheduler = Scheduler::FdosWakeup;
  Predictor predictor = Predictor::Oracle;
  Duration runtime = std::chrono::seconds(50);
  std::uint64_t seed = 1;
  double load = 0.5;                         // offered load as a fraction of the link rate
  TrafficConfig traffic;                     // source shape; load and seed are set per ONU
  Duration ewma_half_life = from_ms(10);
  Duration predict_horizon = std::chrono::seconds(1);
  bool onu_dereg_guard = true;               // sleeping ONUs also wake before deregistration
  // When only the minimum-sleep bound empties a window (every upper bound is
  // still reachable), schedule over [LB_p, UB] instead of waking at once.
  bool relax_min_sleep = true;
  std::int64_t max_events = 0;               // stop early past this many events; 0 = no cap

  Duration rtt_of(int onu) const { return rtt.empty() ? default_rtt : rtt.at(onu); }

  Duration max_rtt() const {
    Duration m = default_rtt;
    if (!rtt.empty()) m = *std::max_element(rtt.begin(), rtt.end());
    return m;
  }

  Duration tx_time(std::int64_t bytes) const {
    return Duration(std::llround(static_cast<double>(bytes) * 8e9 / link_rate_bps));
  }

  std::int64_t buffer_bytes() const { return buffer_bits / 8; }
  std::int64_t threshold_bytes() const { return threshold_bits / 8; }

  // B_m: data bytes per maximum cycle after the guard and REPORT overhead of
  // polling every ONU. GATEs are pipelined, so the round trip costs nothing.
  std::int64_t max_cycle_bytes() const {
    const Duration usable = max_cycle - num_onus * (guard + tx_time(report_bytes));
    return static_cast<std::int64_t>(std::floor(static_cast<double>(usable.count()) * link_rate_bps / 8e9));
  }

  Duration deep_sleep_threshold() const {
    return deep_threshold.value_or(break_even(power, SleepMode::DeepSleep, SleepMode::FastSleep));
  }
  Duration fast_sleep_threshold() const {
    return fast_threshold.value_or(break_even(power, SleepMode::FastSleep, SleepMode::Doze));
  }
  Duration min_sleep_threshold(SleepMode m) const {
    return m == SleepMode::DeepSleep ? deep_sleep_threshold() : fast_sleep_threshold();
  }

  // Per-ONU source load: network load spread evenly over the ONUs, relative
  // to each ONU's peak rate.
  double onu_load() const { return load * link_rate_bps / (num_onus * traffic.peak_rate_bps); }

  TrafficConfig onu_traffic() const {
    TrafficConfig t = traffic;
    t.load = onu_load();
    t.seed = seed;
    return t;
  }

  void validate() const {
    if (num_onus < 1) throw ValidationError("need at least one ONU");
    if (max_cycle <= kZero) throw ValidationError("max cycle time must be positive");
    if (!rtt.empty() && static_cast<int>(rtt.size()) != num_onus)
      throw ValidationError("per-ONU rtt list must have one entry per ONU");
    for (int i = 0; i < num_onus; ++i)
      if (rtt_of(i) <= kZero) throw ValidationError("round-trip time must be positive");
    if (!(link_rate_bps > 0.0)) throw ValidationError("link rate must be positive");
    if (guard < kZero || guard * num_onus >= max_cycle) throw ValidationError("guard time must be below T_cm/N");
    if (threshold_bits <= 0 || threshold_bits > buffer_bits)
      throw ValidationError("buffer threshold must lie in (0, buffer capacity]");
    if (buffer_bits / 8 < traffic.packet_bytes) throw ValidationError("buffer smaller than one packet");
    if (dereg_time <= kZero || decision_period <= kZero || runtime <= kZero)
      throw ValidationError("deregistration time, decision period and runtime must be positive");
    if (max_cycle_bytes() < traffic.packet_bytes)
      throw ValidationError("max cycle leaves no room for a data packet after overheads");
    power.validate();
    if (load < 0.0 || load > 1.0) throw ValidationError("load must lie in [0, 1]");
    if (load > 0.0) {
      if (onu_load() > 1.0) throw ValidationError("per-ONU load exceeds the ONU peak rate");
      onu_traffic().validate();
    }
    if (max_events < 0) throw ValidationError("event cap must be non-negative");
    if (ewma_half_life <= kZero || predict_horizon <= kZero)
      throw ValidationError("predictor half-life and horizon must be positive");
  }
};

struct OsmpTiming {
  Duration decision_period;  // T_m
  Duration max_cycle;        // T_cm
  Duration deep_threshold;   // T_lb ds
  Duration fast_threshold;   // T_lb fs
  PowerProfile power;

  static OsmpTiming from(const SimConfig& cfg) {
    return {cfg.decision_period, cfg.max_cycle, cfg.deep_sleep_threshold(), cfg.fast_sleep_threshold(), cfg.power};
  }
};

// Rule 1, evaluated every T_m while sleeping: keep the mode or start waking
// (returns Active).
inline SleepMode rule1(SleepMode current, Duration fill_time, const OsmpTiming& t) {
  if (fill_time > t.decision_period + t.power.wake(current) + 2 * t.max_cycle) return current;
  return SleepMode::Active;
}

// Rule 2, evaluated after the wake-time backlog is drained.
inline SleepMode rule2(Duration fill_time, const OsmpTiming& t) {
  if (t.deep_threshold <= fill_time) return SleepMode::DeepSleep;
  if (t.fast_threshold < fill_time) return SleepMode::FastSleep;
  return SleepMode::Active;
}

// Limited-scheme grant: min(report, B_m / N_a) for ONUs allocated to the
// cycle, nothing otherwise.
inline std::int64_t grant_size(std::int64_t report_bytes, int active_count, std::int64_t max_cycle_bytes,
                               bool assigned) {
  if (!assigned) return 0;
  if (active_count <= 0) {
    if (report_bytes > 0) throw Error("grant requested in a cycle with no active ONUs");
    return 0;
  }
  return std::min(report_bytes, max_cycle_bytes / active_count);
}

struct WakePlan {
  bool send = false;
  Duration offset{};  // from the epoch, >= 0
  bool late = false;  // ideal send time already passed; sent immediately
};

// Wake-up message for an ONU assigned slot j at epoch t: ideal send time
// t + (j-1) T_cm - T_sw - T_rtt, sent only if it falls before t + T_cm.
inline WakePlan plan_wakeup(int slot, Duration wake_time, Duration rtt, Duration max_cycle) {
  const Duration ideal = (slot - 1) * max_cycle - wake_time - rtt;
  WakePlan p;
  if (!(ideal < max_cycle)) return p;
  p.send = true;
  p.late = ideal < kZero;
  p.offset = std::max(ideal, kZero);
  return p;
}

// Largest slot for which plan_wakeup would send a message this epoch.
inline int last_sendable_slot(Duration wake_time, Duration rtt, Duration max_cycle) {
  // (j-1) T_cm < T_cm + T_sw + T_rtt
  const auto bound = max_cycle + wake_time + rtt;
  return static_cast<int>(ceil_div(bound, max_cycle));
}

}  // namespace fdos::sim
