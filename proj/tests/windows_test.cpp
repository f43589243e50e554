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

#include "fdos/rng.hpp"
#include "fdos/windows.hpp"

namespace fdos {
namespace {

constexpr Duration kCycle = from_ms(2);

WindowConfig config_with_wake(SleepMode m, Duration t_sw) {
  WindowConfig cfg;
  cfg.power.wake_time[index_of(m)] = t_sw;
  return cfg;
}

OnuScheduleState state(SleepMode m = SleepMode::FastSleep) {
  OnuScheduleState s;
  s.rtt = from_us(200);
  s.sleep_mode = m;
  s.reported_fill_time = from_ms(10);
  return s;
}

TEST(ForcedSlot, PastWakeRoundsToFirstSlot) {
  auto s = state(SleepMode::FastSleep);
  s.wake_sent = from_us(-500);
  EXPECT_EQ(forced_slot(s, WindowConfig{}), 1);
}

TEST(ForcedSlot, DeepSleepWake) {
  auto s = state(SleepMode::DeepSleep);
  s.wake_sent = from_us(-500);
  EXPECT_EQ(forced_slot(s, WindowConfig{}), 4);
}

TEST(ForcedSlot, EarlyGate) {
  auto s = state(SleepMode::FastSleep);
  s.wake_sent = from_ms(-1);
  s.last_gate = from_us(-500);
  EXPECT_EQ(forced_slot(s, WindowConfig{}), 1);
}

TEST(ForcedSlot, RequiresWake) { EXPECT_THROW(forced_slot(state(), WindowConfig{}), PreconditionError); }

TEST(UbUs, Examples) {
  auto s = state();
  EXPECT_EQ(ub_us(s, kCycle), 4);
  s.last_report = from_ms(-2);
  EXPECT_EQ(ub_us(s, kCycle), 3);
  s.last_report = kZero;
  s.reported_fill_time = from_ms(4);
  EXPECT_EQ(ub_us(s, kCycle), 1);
  s.reported_fill_time = from_ms(1);
  EXPECT_THROW(ub_us(s, kCycle), InfeasibleWindow);
}

TEST(UbDs, Examples) {
  auto s = state();
  s.ds_fill_time = from_ms(5);
  EXPECT_EQ(ub_ds(s, kCycle), 3);
  s.ds_fill_time = from_us(1900);
  EXPECT_EQ(ub_ds(s, kCycle), 1);
  s.ds_fill_time.reset();
  EXPECT_EQ(ub_ds(s, kCycle), kUnboundedSlot);
}

TEST(UbDereg, Examples) {
  auto s = state();
  s.last_report = from_ms(-10);
  EXPECT_EQ(ub_dereg(s, kCycle, from_ms(50)), 21);
  s.last_report = kZero;
  EXPECT_EQ(ub_dereg(s, kCycle, from_ms(50)), 26);
  s.last_report = from_ms(-49);
  EXPECT_EQ(ub_dereg(s, kCycle, from_ms(50)), 1);
  s.last_report = from_ms(-52);
  EXPECT_THROW(ub_dereg(s, kCycle, from_ms(50)), InfeasibleWindow);
}

TEST(LbPresent, Examples) {
  EXPECT_EQ(lb_present(state(SleepMode::DeepSleep), WindowConfig{}), 4);
  EXPECT_EQ(lb_present(state(SleepMode::FastSleep), WindowConfig{}), 2);
  EXPECT_EQ(lb_present(state(SleepMode::FastSleep), config_with_wake(SleepMode::FastSleep, from_us(1800))), 2);
}

TEST(LbMinSleep, Examples) {
  auto s = state();
  s.last_report = from_ms(-1);
  s.min_sleep_threshold = from_ms(8);
  EXPECT_EQ(lb_min_sleep(s, kCycle), 3);
  s.last_report = kZero;
  s.min_sleep_threshold = from_ms(4);
  EXPECT_EQ(lb_min_sleep(s, kCycle), 1);
  s.last_report = from_ms(-6);
  s.min_sleep_threshold = from_ms(8);
  EXPECT_EQ(lb_min_sleep(s, kCycle), 1);
}

TEST(Window, ComposesBounds) {
  auto s = state(SleepMode::FastSleep);  // LB_p = 2
  s.last_report = from_ms(-1);
  s.min_sleep_threshold = from_ms(8);    // LB_ms = 3
  s.reported_fill_time = from_ms(11);    // UB_US = floor(6/2)+1 = 4
  const auto w = window(s, WindowConfig{});
  EXPECT_FALSE(w.is_forced());
  EXPECT_EQ(w.lb(), 3);
  EXPECT_EQ(w.ub(), 4);
}

TEST(Window, ForcedPath) {
  auto s = state(SleepMode::FastSleep);
  s.wake_sent = from_us(-500);
  EXPECT_EQ(window(s, WindowConfig{}), FeasibleWindow::forced(1));
}

TEST(Window, EmptyThrowsWithBounds) {
  auto s = state(SleepMode::DeepSleep);  // LB_p = 4
  s.reported_fill_time = from_ms(8);     // UB_US = 3
  try {
    window(s, WindowConfig{});
    FAIL();
  } catch (const InfeasibleWindow& e) {
    EXPECT_EQ(e.lb(), 4);
    EXPECT_EQ(e.ub(), 3);
  }
}

TEST(BuildProblem, TwoRanges) {
  // ONU0: 2..3, ONU1: 3..3.
  auto a = state(SleepMode::FastSleep);
  a.reported_fill_time = from_ms(9);  // UB_US = 3
  auto b = state(SleepMode::FastSleep);
  b.onu_id = 1;
  b.reported_fill_time = from_ms(9);
  b.last_report = from_ms(-1);
  b.min_sleep_threshold = from_ms(8);  // LB_ms = ceil(3/2)+1 = 3
  b.reported_fill_time = from_ms(10);  // UB_US = floor(5/2)+1 = 3
  const auto built = build_problem({a, b}, WindowConfig{});
  ASSERT_TRUE(built.problem);
  const auto& p = *built.problem;
  EXPECT_EQ(p.num_slots(), 3);
  EXPECT_EQ(p.arcs[0], (std::vector<int>{2, 3}));
  EXPECT_EQ(p.arcs[1], (std::vector<int>{3}));
  EXPECT_TRUE(built.immediate_wake.empty());
}

TEST(BuildProblem, ForcedAndRange) {
  auto a = state(SleepMode::FastSleep);
  a.wake_sent = kZero;  // ceil(0.325/2)+1 = 2
  auto b = state(SleepMode::Doze);
  b.onu_id = 1;
  b.reported_fill_time = from_ms(10);  // UB_US = 4, LB_p = 2
  b.rtt = from_us(100);
  const auto built = build_problem({a, b}, WindowConfig{});
  ASSERT_TRUE(built.problem);
  EXPECT_EQ(built.problem->arcs[0], (std::vector<int>{2}));
  EXPECT_EQ(built.problem->arcs[1], (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(built.problem->slots, (std::vector<int>{1, 2, 3, 4}));
}

TEST(BuildProblem, InfeasibleOnuRoutedToSideList) {
  auto a = state(SleepMode::FastSleep);
  auto bad = state(SleepMode::DeepSleep);
  bad.onu_id = 7;
  bad.reported_fill_time = from_ms(1);
  const auto built = build_problem({a, bad}, WindowConfig{});
  ASSERT_TRUE(built.problem);
  EXPECT_EQ(built.problem->num_onus(), 1);
  EXPECT_EQ(built.immediate_wake, std::vector<int>{7});
}

TEST(WindowProperties, MonotoneAndWithinComponents) {
  CounterRng rng(11, 1);
  const WindowConfig cfg;
  for (int trial = 0; trial < 5000; ++trial) {
    OnuScheduleState s;
    s.rtt = from_us(rng.uniform_int(1, 2000));
    s.sleep_mode = rng.bernoulli(0.5) ? SleepMode::DeepSleep : SleepMode::FastSleep;
    s.last_report = Duration(-rng.uniform_int(0, 49'000'000));
    s.reported_fill_time = Duration(rng.uniform_int(0, 200'000'000));
    s.min_sleep_threshold = Duration(rng.uniform_int(0, 40'000'000));
    if (rng.bernoulli(0.3)) s.ds_fill_time = Duration(rng.uniform_int(0, 50'000'000));

    auto bigger = s;
    bigger.reported_fill_time += Duration(rng.uniform_int(0, 10'000'000));
    EXPECT_GE(detail::raw_ub_us(bigger, cfg.max_cycle), detail::raw_ub_us(s, cfg.max_cycle));

    try {
      const auto w = window(s, cfg);
      EXPECT_GE(w.lb(), lb_present(s, cfg));
      EXPECT_GE(w.lb(), lb_min_sleep(s, cfg.max_cycle));
      EXPECT_LE(w.ub(), ub_us(s, cfg.max_cycle));
      EXPECT_LE(w.ub(), ub_ds(s, cfg.max_cycle));
      EXPECT_LE(w.ub(), ub_dereg(s, cfg.max_cycle, cfg.dereg_time));
      EXPECT_FALSE(w.is_forced());
    } catch (const InfeasibleWindow&) {
    }
  }
}

}  // namespace
}  // namespace fdos
