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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fdos/instance_gen.hpp"
#include "fdos/io/instance.hpp"
#include "fdos/io/scenario.hpp"
#include "fdos/io/sweep.hpp"

namespace fdos::io {
namespace {

const char* kSmallInstance = R"({
  "num_onus": 3,
  "num_slots": 3,
  "windows": [{"forced": 1}, {"forced": 1}, {"lb": 1, "ub": 3}]
})";

TEST(Instance, ParsesExample) {
  const InstanceFile f = parse_instance(kSmallInstance);
  EXPECT_EQ(f.num_onus, 3);
  EXPECT_EQ(f.num_slots, 3);
  EXPECT_EQ(f.first_slot, 1);
  ASSERT_EQ(f.windows.size(), 3u);
  EXPECT_TRUE(f.windows[0].forced);
  EXPECT_FALSE(f.windows[2].forced);
  EXPECT_EQ(f.windows[2].ub, 3);
  EXPECT_FALSE(f.big_weight.has_value());
  EXPECT_EQ(f.problem().num_onus(), 3);
}

TEST(Instance, RoundTripIsIdentity) {
  GenOptions opt;
  opt.max_onu_weight = 5;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    InstanceFile f = InstanceFile::from(generate_instance(6, 4, seed, opt));
    if (seed % 2 == 0) f.big_weight = 1000 + static_cast<std::int64_t>(seed);
    const std::string text = to_json(f);
    const InstanceFile back = parse_instance(text);
    EXPECT_EQ(back, f);
    EXPECT_EQ(to_json(back), text);
  }
}

std::string field_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(Instance, DiagnosticsNameTheField) {
  EXPECT_EQ(field_of(R"({"num_onus": 1, "num_slots": 1, "windows": [{"lb": "x", "ub": 1}]})"), "windows[0].lb");
  EXPECT_EQ(field_of(R"({"num_onus": 1, "num_slots": 1, "windows": [{"lb": 1}]})"), "windows[0].ub");
  EXPECT_EQ(field_of(R"({"num_onus": 1, "num_slots": 1, "windows": [{"forced": 1}], "extra": 2})"), "extra");
  EXPECT_EQ(field_of(R"({"num_slots": 1, "windows": []})"), "num_onus");
  EXPECT_EQ(field_of(R"({"num_onus": 2, "num_slots": 1, "windows": [{"forced": 1}]})"), "windows");
  EXPECT_EQ(field_of(R"({"num_onus": 1, "num_slots": 1, "windows": [{"forced": 1}], "weights": [0]})"),
            "weights[0]");
  EXPECT_THROW(parse_instance("{not json"), ParseError);
}

TEST(Scenario, DefaultSweepShape) {
  const Scenario sc = parse_scenario("loads = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]\n");
  const auto pts = sc.points();
  ASSERT_EQ(pts.size(), 18u);
  EXPECT_EQ(pts[0].config.num_onus, 16);
  EXPECT_EQ(pts[0].config.default_rtt, from_us(200));
  EXPECT_EQ(pts[0].config.threshold_bits, 1'000'000);
  EXPECT_EQ(pts[0].config.scheduler, sim::Scheduler::OsmpEoOnly);
  EXPECT_EQ(pts[1].config.scheduler, sim::Scheduler::FdosWakeup);
  EXPECT_DOUBLE_EQ(pts[17].config.load, 0.9);
}

TEST(Scenario, AxesAndReplications) {
  const Scenario sc = parse_scenario(
      "loads = [0.2, 0.4]\nnum_onus = [16, 32]\nrtt_us = [200, 1000]\nthreshold_bits = [1000000, 500000]\n"
      "replications = 3\nseed = 7\nschedulers = [\"fdos\"]\nruntime_s = 0.5\n");
  const auto pts = sc.points();
  ASSERT_EQ(pts.size(), 3u * 2 * 2 * 2 * 2);
  EXPECT_EQ(pts.front().config.seed, 7u);
  EXPECT_EQ(pts.back().config.seed, 9u);
  EXPECT_EQ(pts.back().replication, 2);
  EXPECT_EQ(pts.back().config.runtime, from_ms(500));
  EXPECT_EQ(pts.back().config.default_rtt, from_us(1000));
}

TEST(Scenario, UnknownKeyRejectedWithLine) {
  try {
    parse_scenario("loads = [0.5]\nbogus = 3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "bogus");
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Scenario, EmptyLoadsRejected) {
  EXPECT_THROW(parse_scenario("loads = []\n"), ValidationError);
  EXPECT_THROW(parse_scenario("seed = 3\n"), ValidationError);
  EXPECT_THROW(parse_scenario("loads = [1.5]\n"), ValidationError);
  EXPECT_THROW(parse_scenario("loads = [0.5\n"), ParseError);
}

TEST(Sweep, HeaderIsFrozen) {
  std::ostringstream os;
  write_rows(os, {});
  EXPECT_EQ(os.str(),
            "scheduler,load,N,T_rtt_ns,B_th_bits,energy_J,energy_efficiency,avg_delay_ns,drops,dereg_events,"
            "mean_jain,mean_cycle_ns,replication,status\n");
}

TEST(Sweep, SummaryStatistics) {
  const Summary s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_TRUE(std::isnan(summarize({2.0}).stddev));
}

std::string sweep_csv(int workers) {
  const Scenario sc = parse_scenario("loads = [0.3, 0.7]\nruntime_s = 0.3\nreplications = 2\nnum_onus = [8]\n");
  const auto rows = run_sweep(sc, workers);
  std::ostringstream os;
  write_rows(os, rows);
  write_summary(os, rows);
  return os.str();
}

TEST(Sweep, DeterministicAcrossRunsAndWorkers) {
  const std::string a = sweep_csv(1);
  EXPECT_EQ(a, sweep_csv(1));
  EXPECT_EQ(a, sweep_csv(4));
  // header + 2 reps x 2 loads x 2 schedulers, then summary header + 4 points
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 8 + 1 + 4);
}

}  // namespace
}  // namespace fdos::io
