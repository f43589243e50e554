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

// Measurement ledgers: time and energy per power mode, packet delays, and the
// metrics row a run produces.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fdos/model.hpp"
#include "fdos/sim/config.hpp"

namespace fdos::sim {

struct EnergyLedger {
  std::array<Duration, 4> time_in_mode{};

  void add(SleepMode m, Duration d) { time_in_mode[index_of(m)] += d; }

  Duration total() const {
    Duration t{};
    for (auto d : time_in_mode) t += d;
    return t;
  }

  double joules(const PowerProfile& p) const {
    double e = 0.0;
    for (SleepMode m : kAllModes) e += p.power(m) * static_cast<double>(time_in_mode[index_of(m)].count()) * 1e-9;
    return e;
  }

  double fraction(SleepMode m) const {
    return static_cast<double>(time_in_mode[index_of(m)].count()) / static_cast<double>(total().count());
  }
};

struct DelayLedger {
  std::int64_t arrived = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t total_delay_ns = 0;
  Duration max_delay{};

  void record(Duration d) {
    ++delivered;
    total_delay_ns += d.count();
    max_delay = std::max(max_delay, d);
  }

  double mean_ns() const { return delivered ? static_cast<double>(total_delay_ns) / delivered : 0.0; }
};

struct MetricsReport {
  Scheduler scheduler = Scheduler::FdosWakeup;
  Predictor predictor = Predictor::Oracle;
  double load = 0.0;
  int num_onus = 0;
  Duration rtt{};
  std::int64_t threshold_bits = 0;
  Duration runtime{};

  double energy_joules = 0.0;      // all ONUs
  double energy_efficiency = 0.0;  // 1 - E / (N * P_on * runtime)
  double avg_delay_ns = 0.0;
  std::int64_t drops = 0;
  std::int64_t dereg_events = 0;
  double mean_jain = 0.0;
  double mean_cycle_ns = 0.0;

  std::int64_t arrivals = 0;
  std::int64_t delivered = 0;
  std::int64_t queued_at_end = 0;
  std::int64_t in_flight_at_end = 0;  // sent but not yet at the OLT
  Duration max_report_gap{};
  std::int64_t cycles = 0;
  std::int64_t fdos_runs = 0;
  std::int64_t wake_messages = 0;
  std::int64_t late_wakes = 0;
  std::int64_t immediate_wakes = 0;
  std::int64_t self_wakes = 0;
  bool truncated = false;           // event cap hit before the runtime elapsed
  std::int64_t events = 0;
  std::int64_t gate_overlaps = 0;   // bursts closer than the guard time at the OLT
  std::vector<EnergyLedger> per_onu;

  bool time_conserved() const {
    for (const auto& l : per_onu)
      if (l.total() != runtime) return false;
    return true;
  }
  bool packets_conserved() const { return arrivals == delivered + drops + queued_at_end + in_flight_at_end; }
};

}  // namespace fdos::sim
