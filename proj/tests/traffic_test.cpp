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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fdos/traffic.hpp"

namespace fdos {
namespace {

constexpr TimePoint at_seconds(int s) { return TimePoint(std::chrono::seconds(s)); }

std::vector<Arrival> collect(const TrafficConfig& cfg, TimePoint horizon, std::uint64_t stream = 0) {
  TrafficGenerator gen(cfg, stream);
  std::vector<Arrival> out;
  for (Arrival a = gen.next_arrival(); a.time < horizon; a = gen.next_arrival()) out.push_back(a);
  return out;
}

TEST(Traffic, RejectsNonPositiveLoad) {
  TrafficConfig cfg;
  cfg.load = 0.0;
  EXPECT_THROW(TrafficGenerator(cfg, 0), ValidationError);
  cfg.load = -0.1;
  EXPECT_THROW(TrafficGenerator(cfg, 0), ValidationError);
  cfg.load = 1.5;
  EXPECT_THROW(TrafficGenerator(cfg, 0), ValidationError);
}

TEST(Traffic, ShapeFromHurst) {
  TrafficConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.alpha(), 1.4);
  cfg.shape = 1.7;
  EXPECT_DOUBLE_EQ(cfg.alpha(), 1.7);
}

TEST(Traffic, SameSeedSameSequence) {
  TrafficConfig cfg;
  cfg.seed = 42;
  const auto a = collect(cfg, at_seconds(2)), b = collect(cfg, at_seconds(2));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].time, b[k].time);
  cfg.seed = 43;
  const auto c = collect(cfg, at_seconds(2));
  EXPECT_FALSE(c.size() == a.size() && c.front().time == a.front().time);
}

TEST(Traffic, MonotoneFixedSizePackets) {
  TrafficConfig cfg;
  const auto a = collect(cfg, at_seconds(5));
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_LE(a[k - 1].time, a[k].time);
  for (const auto& x : a) EXPECT_EQ(x.bytes, 1500);
}

TEST(Traffic, TruncatedParetoMeanCalibrated) {
  // Capped mean of the calibrated scale, integrated independently.
  const double mean = 0.323, alpha = 1.4, cap = 10.0;
  TruncatedPareto d(mean, alpha, cap);
  const double xm = d.scale();
  // E[min(X, cap)] = integral_0^cap P(X > x) dx.
  const int steps = 2'000'000;
  double integral = xm;
  const double h = (cap - xm) / steps;
  for (int k = 0; k < steps; ++k) {
    const double x = xm + (k + 0.5) * h;
    integral += std::pow(xm / x, alpha) * h;
  }
  EXPECT_NEAR(integral, mean, 1e-6);
}

TEST(Traffic, MeanRateConverges) {
  TrafficConfig cfg;
  cfg.load = 0.5;
  cfg.seed = 7;
  const auto arrivals = collect(cfg, at_seconds(50));
  // Independent tally: count packets per 1 s bucket and sum.
  std::vector<long long> per_second(50, 0);
  for (const auto& a : arrivals) ++per_second[a.time.time_since_epoch().count() / 1'000'000'000];
  long long packets = 0;
  for (auto c : per_second) packets += c;
  ASSERT_EQ(packets, static_cast<long long>(arrivals.size()));
  const double measured = packets * 1500.0 * 8.0 / 50.0;
  EXPECT_NEAR(measured / 50e6, 1.0, 0.05) << "measured " << measured;
}

TEST(Traffic, BurstierThanPoisson) {
  TrafficConfig cfg;
  cfg.load = 0.4;
  cfg.seed = 3;
  const auto arrivals = collect(cfg, at_seconds(20));
  std::vector<double> bins(2000, 0.0);
  for (const auto& a : arrivals) bins[a.time.time_since_epoch().count() / 10'000'000] += 1.0;
  double mean = 0.0, var = 0.0;
  for (double b : bins) mean += b;
  mean /= bins.size();
  for (double b : bins) var += (b - mean) * (b - mean);
  var /= bins.size() - 1;
  EXPECT_GT(var, mean);
}

TEST(Traffic, TraceExport) {
  std::ostringstream os;
  write_trace_header(os);
  write_trace_row(os, Arrival{TimePoint(Duration(1234)), 1500}, 3);
  EXPECT_EQ(os.str(), "arrival_ns,bytes,onu_id\n1234,1500,3\n");
}

}  // namespace
}  // namespace fdos
