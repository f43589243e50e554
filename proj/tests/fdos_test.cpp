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
#include <set>
#include <vector>

#include "fdos/fdos.hpp"
#include "fdos/instance_gen.hpp"
#include "fdos/oracle.hpp"

namespace fdos {
namespace {

TEST(Fdos, FirstLevelFeasible) {
  auto p = make_problem({0, 1}, {{0, 1}, {0}, {0}});
  const auto r = fdos(p);
  EXPECT_TRUE(r.first_level_feasible);
  EXPECT_EQ(r.assignment.slot_of, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(f1(r.assignment), 5);
  EXPECT_EQ(r.recursion_depth, 1);
}

TEST(Fdos, RecursesOnCompetingPair) {
  auto p = make_problem({0, 1, 2}, {{0}, {0}, {0, 1, 2}}, ProblemOptions{.big_weight = 100});
  const auto r = fdos(p);
  EXPECT_FALSE(r.first_level_feasible);
  ASSERT_EQ(r.partitions.size(), 1u);
  const auto& part = r.partitions[0];
  EXPECT_EQ(part.underfull_slots, (std::vector<int>{1, 2}));
  EXPECT_EQ(part.saturated_slots, (std::vector<int>{0}));
  EXPECT_EQ(part.underfull_onus, (std::vector<int>{2}));
  EXPECT_EQ(part.saturated_onus, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.assignment.slot_of, (std::vector<int>{0, 0, 2}));
  EXPECT_EQ(f1(r.assignment), 5);
  EXPECT_EQ(f2(r.assignment, p), 2);
  EXPECT_EQ(f(r.assignment, p), exact_solve(p).best_f);
}

TEST(Fdos, CompleteSquareIsMatching) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::vector<int>> arcs(n, contiguous_slots(1, n));
    const auto r = fdos(make_problem(contiguous_slots(1, n), arcs));
    EXPECT_EQ(f1(r.assignment), n);
  }
}

TEST(Fdos, EmptyArcListRejected) {
  auto p = make_problem({1, 2}, {{1}, {}}, {}, {4, 9});
  try {
    fdos(p);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.onus(), std::vector<int>{9});
  }
}

TEST(Partition, ClosureFromHandTrace) {
  // Penalized outcome M_0={0}, M_1={2}, M_2={}, ONU1 off-arc on slot 2.
  auto p = make_problem({0, 1, 2}, {{0}, {0}, {0, 1, 2}});
  PenalizedSolution pen;
  pen.solution.status = TransportStatus::Feasible;
  pen.solution.col_of = {0, 2, 1};
  pen.unassigned = {1};
  const auto part = partition(p, {0, 1, 2}, {0, 1, 2}, 1, pen);
  EXPECT_EQ(part.underfull_slots, (std::vector<int>{1, 2}));
  EXPECT_EQ(part.saturated_slots, (std::vector<int>{0}));
  EXPECT_EQ(part.underfull_onus, (std::vector<int>{2}));
  EXPECT_EQ(part.saturated_onus, (std::vector<int>{0, 1}));
}

TEST(Partition, NoClosureWhenNothingReachesL) {
  auto p = make_problem({0, 1}, {{0}, {0}});
  PenalizedSolution pen;
  pen.solution.status = TransportStatus::Feasible;
  pen.solution.col_of = {0, 1};
  pen.unassigned = {1};
  const auto part = partition(p, {0, 1}, {0, 1}, 1, pen);
  EXPECT_EQ(part.underfull_slots, std::vector<int>{1});
  EXPECT_EQ(part.saturated_slots, std::vector<int>{0});
  EXPECT_TRUE(part.underfull_onus.empty());
}

TEST(Partition, RequiresPenalizedOnu) {
  auto p = make_problem({0}, {{0}});
  PenalizedSolution pen;
  pen.solution.col_of = {0};
  EXPECT_THROW(partition(p, {0}, {0}, 1, pen), PreconditionError);
}

TEST(Bounds, BalancedLowerBound) {
  EXPECT_EQ(balanced_f1_lower_bound(5, 3), 9);
  EXPECT_EQ(balanced_f1_lower_bound(7, 3), 17);
  EXPECT_EQ(balanced_f1_lower_bound(4, 4), 4);
}

TEST(Bounds, CappedUpperBound) {
  EXPECT_EQ(capped_f1_upper_bound(5, 2), 9);
  EXPECT_EQ(capped_f1_upper_bound(7, 3), 19);
  EXPECT_EQ(capped_f1_upper_bound(4, 1), 4);
}

TEST(Ratio, Examples) {
  EXPECT_EQ(approximation_ratio(498, 498), Rational(0));
  EXPECT_EQ(approximation_ratio(900, 498), Rational(402, 498));
  EXPECT_THROW(approximation_ratio(1, 0), UndefinedInput);
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

TEST(FdosProperties, RandomInstances) {
  GenOptions opt;
  opt.max_onu_weight = 3;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CounterRng rng(seed, 17);
    const int n = static_cast<int>(rng.uniform_int(1, 8));
    const int m = static_cast<int>(rng.uniform_int(1, 6));
    const auto p = generate_instance(n, m, seed, opt).problem();
    const auto r = fdos(p);
    ASSERT_TRUE(respects_arcs(r.assignment, p)) << "seed " << seed;
    EXPECT_LE(r.recursion_depth, std::min(n, m));
    const auto opt_res = exact_solve(p);
    EXPECT_LE(approximation_ratio(f(r.assignment, p), opt_res.best_f), Rational(1)) << "seed " << seed;

    for (const auto& part : r.partitions) {
      // Disjoint covers of the parent sets, neither side empty, no arc N_O -> L.
      EXPECT_FALSE(part.underfull_slots.empty());
      EXPECT_FALSE(part.saturated_slots.empty());
      const auto L = as_set(part.underfull_slots);
      for (int row : part.saturated_onus)
        for (int s : p.arcs[row]) EXPECT_FALSE(L.count(s)) << "seed " << seed;
      auto onus = as_set(part.underfull_onus);
      for (int row : part.saturated_onus) EXPECT_TRUE(onus.insert(row).second);
    }
  }
}

TEST(FdosProperties, SlotSetsShrinkPerLevel) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto p = generate_instance(8, 6, seed).problem();
    const auto r = fdos(p);
    for (const auto& part : r.partitions) {
      const std::size_t parent = part.underfull_slots.size() + part.saturated_slots.size();
      EXPECT_LT(part.underfull_slots.size(), parent);
      EXPECT_LT(part.saturated_slots.size(), parent);
    }
  }
}

TEST(FdosProperties, PartitionAdditivity) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 400 && checked < 40; ++seed) {
    const auto p = generate_instance(7, 5, seed).problem();
    const auto r = fdos(p);
    if (r.partitions.empty()) continue;
    const auto& top = r.partitions.front();
    ++checked;
    const auto whole = exact_solve(p).best_f;
    std::int64_t parts = 0;
    if (!top.underfull_onus.empty())
      parts += exact_solve(sub_problem(p, top.underfull_onus, top.underfull_slots)).best_f;
    parts += exact_solve(sub_problem(p, top.saturated_onus, top.saturated_slots)).best_f;
    EXPECT_EQ(whole, parts) << "seed " << seed;
  }
  EXPECT_GT(checked, 5);
}

TEST(FdosProperties, Deterministic) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto p = generate_instance(8, 5, seed).problem();
    EXPECT_EQ(fdos(p).assignment, fdos(p).assignment);
  }
}

}  // namespace
}  // namespace fdos
