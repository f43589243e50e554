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

// Scenario files: flat TOML key/value documents holding the simulation
// parameters plus the sweep axes. Every key except `loads` is optional; axis
// keys accept a scalar or an array. Durations carry their unit in the key.
//
//   loads = [0.1, 0.2, 0.3]
//   num_onus = [16, 32]
//   rtt_us = 200
//   threshold_bits = 1000000
//   schedulers = ["osmp", "fdos"]
//   replications = 5
//   runtime_s = 10

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fdos/errors.hpp"
#include "fdos/sim/config.hpp"
#include "toml.hpp"

namespace fdos::io {

struct SweepPoint {
  sim::SimConfig config;
  int replication = 0;
};

struct Scenario {
  sim::SimConfig base;
  std::vector<double> loads;
  std::vector<int> num_onus{16};
  std::vector<Duration> rtts{from_us(200)};
  std::vector<std::int64_t> thresholds{1'000'000};
  std::vector<sim::Scheduler> schedulers{sim::Scheduler::OsmpEoOnly, sim::Scheduler::FdosWakeup};
  int replications = 1;

  // Points in output order: replication, N, T_rtt, B_th, load, scheduler.
  // Replication r runs with seed base.seed + r, shared by all other axes.
  std::vector<SweepPoint> points() const {
    std::vector<SweepPoint> out;
    for (int r = 0; r < replications; ++r)
      for (int n : num_onus)
        for (Duration rtt : rtts)
          for (std::int64_t th : thresholds)
            for (double load : loads)
              for (sim::Scheduler s : schedulers) {
                SweepPoint p{base, r};
                p.config.num_onus = n;
                p.config.default_rtt = rtt;
                p.config.rtt.clear();
                p.config.threshold_bits = th;
                p.config.load = load;
                p.config.scheduler = s;
                p.config.seed = base.seed + static_cast<std::uint64_t>(r);
                out.push_back(std::move(p));
              }
    return out;
  }

  void validate() const {
    if (loads.empty()) throw ValidationError("scenario needs a non-empty load list");
    if (num_onus.empty() || rtts.empty() || thresholds.empty() || schedulers.empty())
      throw ValidationError("sweep axes must not be empty");
    if (replications < 1) throw ValidationError("replications must be >= 1");
    for (const auto& p : points()) p.config.validate();
  }
};

namespace detail {

inline std::string where(const toml::node& n, const std::string& key) {
  return "'" + key + "' (line " + std::to_string(n.source().begin.line) + ")";
}

inline double number(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>(); v && (n.is_floating_point() || n.is_integer())) return *v;
  throw ParseError("field " + where(n, key) + " must be a number", key, static_cast<int>(n.source().begin.line));
}

inline std::int64_t integer(const toml::node& n, const std::string& key) {
  if (n.is_integer()) return *n.value<std::int64_t>();
  throw ParseError("field " + where(n, key) + " must be an integer", key, static_cast<int>(n.source().begin.line));
}

inline bool boolean(const toml::node& n, const std::string& key) {
  if (n.is_boolean()) return *n.value<bool>();
  throw ParseError("field " + where(n, key) + " must be true or false", key, static_cast<int>(n.source().begin.line));
}

inline std::string text(const toml::node& n, const std::string& key) {
  if (n.is_string()) return *n.value<std::string>();
  throw ParseError("field " + where(n, key) + " must be a string", key, static_cast<int>(n.source().begin.line));
}

// Scalar or array of scalars.
template <typename F>
auto axis(const toml::node& n, const std::string& key, F element) {
  std::vector<decltype(element(n, key))> out;
  if (const auto* arr = n.as_array()) {
    for (const auto& e : *arr) out.push_back(element(e, key));
  } else {
    out.push_back(element(n, key));
  }
  return out;
}

inline Duration scaled(double v, double ns_per_unit) { return Duration(std::llround(v * ns_per_unit)); }

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError("malformed scenario at line " + std::to_string(e.source().begin.line) + ": " +
                         std::string(e.description()),
                     "", static_cast<int>(e.source().begin.line));
  }
  using namespace detail;
  Scenario sc;
  sim::SimConfig& c = sc.base;
  bool have_loads = false;
  for (const auto& [k, node] : doc) {
    const std::string key(k.str());
    if (key == "loads") {
      sc.loads = axis(node, key, number);
      have_loads = true;
    } else if (key == "num_onus") {
      sc.num_onus.clear();
      for (auto v : axis(node, key, integer)) sc.num_onus.push_back(static_cast<int>(v));
    } else if (key == "rtt_us") {
      sc.rtts.clear();
      for (double v : axis(node, key, number)) sc.rtts.push_back(scaled(v, 1e3));
    } else if (key == "threshold_bits") {
      sc.thresholds = axis(node, key, integer);
    } else if (key == "schedulers") {
      sc.schedulers.clear();
      for (const auto& s : axis(node, key, detail::text)) sc.schedulers.push_back(sim::parse_scheduler(s));
    } else if (key == "replications") {
      sc.replications = static_cast<int>(integer(node, key));
    } else if (key == "predictor") {
      c.predictor = sim::parse_predictor(detail::text(node, key));
    } else if (key == "runtime_s") {
      c.runtime = scaled(number(node, key), 1e9);
    } else if (key == "seed") {
      const auto v = integer(node, key);
      if (v < 0) throw ValidationError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "max_cycle_us") {
      c.max_cycle = scaled(number(node, key), 1e3);
    } else if (key == "guard_ns") {
      c.guard = scaled(number(node, key), 1.0);
    } else if (key == "link_rate_bps") {
      c.link_rate_bps = number(node, key);
    } else if (key == "report_bytes") {
      c.report_bytes = static_cast<int>(integer(node, key));
    } else if (key == "buffer_bits") {
      c.buffer_bits = integer(node, key);
    } else if (key == "dereg_ms") {
      c.dereg_time = scaled(number(node, key), 1e6);
    } else if (key == "decision_period_us") {
      c.decision_period = scaled(number(node, key), 1e3);
    } else if (key == "deep_threshold_us") {
      c.deep_threshold = scaled(number(node, key), 1e3);
    } else if (key == "fast_threshold_us") {
      c.fast_threshold = scaled(number(node, key), 1e3);
    } else if (key == "hurst") {
      c.traffic.hurst = number(node, key);
    } else if (key == "peak_rate_bps") {
      c.traffic.peak_rate_bps = number(node, key);
    } else if (key == "packet_bytes") {
      c.traffic.packet_bytes = static_cast<int>(integer(node, key));
    } else if (key == "sources") {
      c.traffic.num_sources = static_cast<int>(integer(node, key));
    } else if (key == "mean_on_ms") {
      c.traffic.mean_on = scaled(number(node, key), 1e6);
    } else if (key == "ewma_half_life_ms") {
      c.ewma_half_life = scaled(number(node, key), 1e6);
    } else if (key == "predict_horizon_ms") {
      c.predict_horizon = scaled(number(node, key), 1e6);
    } else if (key == "onu_dereg_guard") {
      c.onu_dereg_guard = boolean(node, key);
    } else if (key == "relax_min_sleep") {
      c.relax_min_sleep = boolean(node, key);
    } else if (key == "max_events") {
      c.max_events = integer(node, key);
    } else {
      throw ParseError("unknown key " + where(node, key), key, static_cast<int>(node.source().begin.line));
    }
  }
  if (!have_loads) throw ValidationError("scenario needs a non-empty load list ('loads')");
  sc.validate();
  return sc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fdos::io
