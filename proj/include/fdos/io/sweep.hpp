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

// Sweep execution and CSV output. Points run on a worker pool; rows are
// emitted in sweep order whatever the completion order.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fdos/io/scenario.hpp"
#include "fdos/sim/simulator.hpp"

namespace fdos::io {

struct SweepRow {
  SweepPoint point;
  sim::MetricsReport metrics;
};

// Frozen column order; `replication` and `status` are appended after the
// metric columns.
inline constexpr const char* kRowHeader =
    "scheduler,load,N,T_rtt_ns,B_th_bits,energy_J,energy_efficiency,avg_delay_ns,drops,dereg_events,"
    "mean_jain,mean_cycle_ns,replication,status";

inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_row(std::ostream& os, const SweepRow& r) {
  const auto& c = r.point.config;
  const auto& m = r.metrics;
  os << sim::to_string(c.scheduler) << ',' << fmt_num(c.load) << ',' << c.num_onus << ','
     << c.default_rtt.count() << ',' << c.threshold_bits << ',' << fmt_num(m.energy_joules) << ','
     << fmt_num(m.energy_efficiency) << ',' << fmt_num(m.avg_delay_ns) << ',' << m.drops << ','
     << m.dereg_events << ',' << fmt_num(m.mean_jain) << ',' << fmt_num(m.mean_cycle_ns) << ','
     << r.point.replication << ',' << (m.truncated ? "truncated" : "ok") << '\n';
}

inline void write_rows(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kRowHeader << '\n';
  for (const auto& r : rows) write_row(os, r);
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, nan for a single replication
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) {
    s.stddev = std::nan("");
    return s;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return s;
}

// Per-point mean and sample standard deviation over replications, in order
// of first appearance.
inline void write_summary(std::ostream& os, const std::vector<SweepRow>& rows) {
  using Key = std::tuple<std::string, double, int, std::int64_t, std::int64_t>;
  static const char* metrics[] = {"energy_J",  "energy_efficiency", "avg_delay_ns", "drops",
                                  "dereg_events", "mean_jain",      "mean_cycle_ns"};
  constexpr int kMetrics = 7;
  std::vector<Key> order;
  std::map<Key, std::vector<std::vector<double>>> values;
  for (const auto& r : rows) {
    const auto& c = r.point.config;
    const auto& m = r.metrics;
    Key k{std::string(sim::to_string(c.scheduler)), c.load, c.num_onus, c.default_rtt.count(), c.threshold_bits};
    auto [it, fresh] = values.try_emplace(k, kMetrics);
    if (fresh) order.push_back(k);
    const double v[kMetrics] = {m.energy_joules,
                                m.energy_efficiency,
                                m.avg_delay_ns,
                                static_cast<double>(m.drops),
                                static_cast<double>(m.dereg_events),
                                m.mean_jain,
                                m.mean_cycle_ns};
    for (int i = 0; i < kMetrics; ++i) it->second[i].push_back(v[i]);
  }
  os << "scheduler,load,N,T_rtt_ns,B_th_bits,replications";
  for (const char* name : metrics) os << ',' << name << "_mean," << name << "_sd";
  os << '\n';
  for (const auto& k : order) {
    const auto& vs = values.at(k);
    os << std::get<0>(k) << ',' << fmt_num(std::get<1>(k)) << ',' << std::get<2>(k) << ',' << std::get<3>(k) << ','
       << std::get<4>(k) << ',' << vs[0].size();
    for (const auto& series : vs) {
      const Summary s = summarize(series);
      os << ',' << fmt_num(s.mean) << ',' << fmt_num(s.stddev);
    }
    os << '\n';
  }
}

using Progress = std::function<void(std::size_t done, std::size_t total, const SweepRow&)>;

inline std::vector<SweepRow> run_points(const std::vector<SweepPoint>& points, int workers,
                                        const Progress& progress = {}) {
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      rows[i] = SweepRow{points[i], sim::run(points[i].config)};
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        progress(++done, points.size(), rows[i]);
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  if (n == 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  for (int t = 0; t < n; ++t)
    pool.emplace_back([&] {
      try {
        work();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = points.size();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

inline std::vector<SweepRow> run_sweep(const Scenario& sc, int workers, const Progress& progress = {}) {
  sc.validate();
  return run_points(sc.points(), workers, progress);
}

}  // namespace fdos::io
