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

// Shared domain types for sleeping-ONU slot assignment: sleep modes and their
// power figures, feasible slot windows, the assignment problem instance and
// the fairness/sleep objectives evaluated on an assignment.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "fdos/errors.hpp"
#include "fdos/time.hpp"

namespace fdos {

using Rational = boost::rational<std::int64_t>;

enum class SleepMode { DeepSleep = 0, FastSleep = 1, Doze = 2, Active = 3 };

inline constexpr std::array<SleepMode, 4> kAllModes = {SleepMode::DeepSleep, SleepMode::FastSleep,
                                                       SleepMode::Doze, SleepMode::Active};

inline constexpr std::string_view to_string(SleepMode m) {
  switch (m) {
    case SleepMode::DeepSleep: return "ds";
    case SleepMode::FastSleep: return "fs";
    case SleepMode::Doze: return "dz";
    case SleepMode::Active: return "on";
  }
  return "?";
}

inline constexpr std::size_t index_of(SleepMode m) { return static_cast<std::size_t>(m); }

struct PowerProfile {
  std::array<double, 4> power_watts{};
  std::array<Duration, 4> wake_time{};

  double power(SleepMode m) const { return power_watts[index_of(m)]; }
  Duration wake(SleepMode m) const { return wake_time[index_of(m)]; }

  static PowerProfile defaults() {
    PowerProfile p;
    p.power_watts = {0.75, 1.28, 2.39, 3.984};
    p.wake_time = {from_us(5125), from_us(125), from_us(1), kZero};
    return p;
  }

  void validate() const {
    const double ds = power(SleepMode::DeepSleep), fs = power(SleepMode::FastSleep),
                 dz = power(SleepMode::Doze), on = power(SleepMode::Active);
    if (!(on > dz && dz > fs && fs > ds && ds > 0.0))
      throw ValidationError("power profile must satisfy on > dz > fs > ds > 0");
    if (wake(SleepMode::Active) != kZero) throw ValidationError("active wake time must be zero");
    if (!(wake(SleepMode::DeepSleep) > wake(SleepMode::FastSleep) &&
          wake(SleepMode::FastSleep) > wake(SleepMode::Doze) && wake(SleepMode::Doze) > kZero))
      throw ValidationError("wake times must strictly decrease as power increases");
  }
};

// Per-ONU set of assignable slots: either a single pinned slot (wake-up already
// sent) or an inclusive [lb, ub] range. Assignable slots start at 1.
class FeasibleWindow {
 public:
  struct Forced {
    int slot;
  };
  struct Range {
    int lb;
    int ub;
  };

  static FeasibleWindow forced(int slot) {
    if (slot < 1) throw PreconditionError("forced slot must be >= 1");
    return FeasibleWindow(Forced{slot});
  }

  static FeasibleWindow range(int lb, int ub, int onu = -1) {
    if (lb > ub) throw InfeasibleWindow(onu, lb, ub);
    if (lb < 1) throw PreconditionError("window lower bound must be >= 1");
    return FeasibleWindow(Range{lb, ub});
  }

  bool is_forced() const { return std::holds_alternative<Forced>(v_); }
  int lb() const { return is_forced() ? std::get<Forced>(v_).slot : std::get<Range>(v_).lb; }
  int ub() const { return is_forced() ? std::get<Forced>(v_).slot : std::get<Range>(v_).ub; }
  int width() const { return ub() - lb() + 1; }

  friend bool operator==(const FeasibleWindow& a, const FeasibleWindow& b) {
    return a.is_forced() == b.is_forced() && a.lb() == b.lb() && a.ub() == b.ub();
  }

 private:
  explicit FeasibleWindow(std::variant<Forced, Range> v) : v_(v) {}
  std::variant<Forced, Range> v_;
};

// Instance of the fair slot-assignment ILP. Slots are absolute ids (not
// necessarily contiguous, so that sub-instances over a slot subset keep their
// original weights). arcs[i] lists the slots ONU i may take, sorted.
struct AssignmentProblem {
  std::vector<int> onu_ids;                  // external id per row
  std::vector<int> slots;                    // sorted slot ids
  std::vector<std::vector<int>> arcs;        // per row, sorted subset of slots
  std::vector<std::vector<std::int64_t>> weights;  // [row][column of slot]
  std::int64_t big_weight = 0;               // W
  std::int64_t penalty = 0;                  // H

  int num_onus() const { return static_cast<int>(arcs.size()); }
  int num_slots() const { return static_cast<int>(slots.size()); }

  int column_of(int slot) const {
    auto it = std::lower_bound(slots.begin(), slots.end(), slot);
    if (it == slots.end() || *it != slot) return -1;
    return static_cast<int>(it - slots.begin());
  }

  std::int64_t weight(int row, int slot) const {
    const int c = column_of(slot);
    if (c < 0) throw PreconditionError("slot " + std::to_string(slot) + " not in problem");
    return weights[row][c];
  }

  bool has_arc(int row, int slot) const {
    return std::binary_search(arcs[row].begin(), arcs[row].end(), slot);
  }

  std::int64_t arc_weight_sum() const {
    std::int64_t s = 0;
    for (int i = 0; i < num_onus(); ++i)
      for (int j : arcs[i]) s = checked_add(s, weight(i, j));
    return s;
  }

  void validate() const {
    if (num_onus() < 1) throw InputError("problem needs at least one ONU");
    if (num_slots() < 1) throw InputError("problem needs at least one slot");
    if (!std::is_sorted(slots.begin(), slots.end()) ||
        std::adjacent_find(slots.begin(), slots.end()) != slots.end())
      throw InputError("slot ids must be sorted and unique");
    if (static_cast<int>(onu_ids.size()) != num_onus() || static_cast<int>(weights.size()) != num_onus())
      throw InputError("per-ONU vectors disagree in length");
    for (int i = 0; i < num_onus(); ++i) {
      if (static_cast<int>(weights[i].size()) != num_slots()) throw InputError("weight row has wrong width");
      for (auto w : weights[i])
        if (w < 0) throw InputError("weights must be non-negative", {onu_ids[i]});
      if (!std::is_sorted(arcs[i].begin(), arcs[i].end()) ||
          std::adjacent_find(arcs[i].begin(), arcs[i].end()) != arcs[i].end())
        throw InputError("arc list must be sorted and unique", {onu_ids[i]});
      for (int j : arcs[i])
        if (column_of(j) < 0) throw InputError("arc outside slot set", {onu_ids[i]});
    }
    const auto sum = arc_weight_sum();
    if (big_weight <= sum) throw InputError("W must exceed the sum of arc weights");
    if (penalty <= sum) throw InputError("H must exceed the sum of arc weights");
  }
};

struct ProblemOptions {
  std::vector<std::int64_t> onu_weight;  // w_i, default 1
  std::optional<std::vector<std::vector<std::int64_t>>> weight_matrix;  // overrides w_ij
  std::optional<std::int64_t> big_weight;
  std::optional<std::int64_t> penalty;
};

// Builds a problem with w_ij = j * w_i unless a matrix is supplied, and W, H
// defaulted to 1 + sum of arc weights.
inline AssignmentProblem make_problem(std::vector<int> slots, std::vector<std::vector<int>> arcs,
                                      const ProblemOptions& opt = {}, std::vector<int> onu_ids = {}) {
  AssignmentProblem p;
  std::sort(slots.begin(), slots.end());
  p.slots = std::move(slots);
  for (auto& a : arcs) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  p.arcs = std::move(arcs);
  const int n = p.num_onus();
  if (onu_ids.empty()) {
    onu_ids.resize(n);
    for (int i = 0; i < n; ++i) onu_ids[i] = i;
  }
  p.onu_ids = std::move(onu_ids);
  if (opt.weight_matrix) {
    p.weights = *opt.weight_matrix;
  } else {
    p.weights.assign(n, std::vector<std::int64_t>(p.slots.size(), 0));
    for (int i = 0; i < n; ++i) {
      const std::int64_t wi = opt.onu_weight.empty() ? 1 : opt.onu_weight.at(i);
      for (std::size_t c = 0; c < p.slots.size(); ++c) p.weights[i][c] = checked_mul(p.slots[c], wi);
    }
  }
  if (static_cast<int>(p.weights.size()) != n) throw InputError("weight matrix has wrong height");
  for (auto& row : p.weights)
    if (row.size() != p.slots.size()) throw InputError("weight matrix has wrong width");
  const auto sum = p.arc_weight_sum();
  p.big_weight = opt.big_weight.value_or(sum + 1);
  p.penalty = opt.penalty.value_or(sum + 1);
  return p;
}

inline std::vector<int> contiguous_slots(int first, int count) {
  std::vector<int> s(count);
  for (int k = 0; k < count; ++k) s[k] = first + k;
  return s;
}

// Rows `rows` restricted to slot subset `slots`; weights, W and H are kept so
// objective values stay additive across disjoint sub-instances.
inline AssignmentProblem sub_problem(const AssignmentProblem& p, const std::vector<int>& rows,
                                     std::vector<int> slots) {
  std::sort(slots.begin(), slots.end());
  AssignmentProblem q;
  q.slots = slots;
  q.big_weight = p.big_weight;
  q.penalty = p.penalty;
  for (int r : rows) {
    q.onu_ids.push_back(p.onu_ids[r]);
    std::vector<int> a;
    for (int s : p.arcs[r])
      if (std::binary_search(slots.begin(), slots.end(), s)) a.push_back(s);
    q.arcs.push_back(std::move(a));
    std::vector<std::int64_t> w;
    for (int s : slots) w.push_back(p.weight(r, s));
    q.weights.push_back(std::move(w));
  }
  return q;
}

// Total map ONU row -> slot id.
struct Assignment {
  std::vector<int> slot_of;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// n_j for every slot of the problem, in slot order.
inline std::vector<int> slot_counts(const Assignment& a, const AssignmentProblem& p) {
  std::vector<int> counts(p.slots.size(), 0);
  for (int s : a.slot_of) {
    const int c = p.column_of(s);
    if (c < 0) throw PreconditionError("assignment uses slot " + std::to_string(s) + " outside problem");
    ++counts[c];
  }
  return counts;
}

inline std::int64_t f1(std::span<const int> counts) {
  std::int64_t s = 0;
  for (int n : counts) s = checked_add(s, static_cast<std::int64_t>(n) * n);
  return s;
}

inline std::int64_t f1(const Assignment& a) {
  std::map<int, int> counts;
  for (int s : a.slot_of) ++counts[s];
  std::int64_t total = 0;
  for (auto [slot, n] : counts) total = checked_add(total, static_cast<std::int64_t>(n) * n);
  return total;
}

inline std::int64_t f2(const Assignment& a, const AssignmentProblem& p) {
  if (static_cast<int>(a.slot_of.size()) != p.num_onus())
    throw PreconditionError("assignment size does not match problem");
  std::int64_t s = 0;
  for (int i = 0; i < p.num_onus(); ++i) s = checked_add(s, p.weight(i, a.slot_of[i]));
  return s;
}

inline std::int64_t objective(std::int64_t big_weight, std::int64_t f1_value, std::int64_t f2_value) {
  return checked_add(checked_mul(big_weight, f1_value), -f2_value);
}

// f = W * f1 - f2.
inline std::int64_t f(const Assignment& a, const AssignmentProblem& p) {
  return objective(p.big_weight, f1(a), f2(a, p));
}

inline bool respects_arcs(const Assignment& a, const AssignmentProblem& p) {
  if (static_cast<int>(a.slot_of.size()) != p.num_onus()) return false;
  for (int i = 0; i < p.num_onus(); ++i)
    if (!p.has_arc(i, a.slot_of[i])) return false;
  return true;
}

// Jain's index as (sum n)^2 / sum n^2, without the 1/M normalization.
struct JainIndex {
  Rational exact;
  double value() const { return boost::rational_cast<double>(exact); }
};

inline JainIndex jain_index(std::span<const int> counts) {
  std::int64_t sum = 0;
  for (int n : counts) {
    if (n < 0) throw PreconditionError("negative slot count");
    sum += n;
  }
  const std::int64_t sq = f1(counts);
  if (sq == 0) throw UndefinedInput("Jain index undefined for all-zero counts");
  return JainIndex{Rational(checked_mul(sum, sum), sq)};
}

}  // namespace fdos
