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

// FDOS: fair distribution of sleeping ONUs among future slots.
//
// A level solves the capacitated assignment with every slot capped at
// b = ceil(|N| / |S|). If that is feasible the level's assignment is final.
// Otherwise a penalized solve (complete bipartite, -H off the arc set) places
// as many ONUs as possible; its result splits the slots into an under-full
// set and a saturated set, the ONUs follow their slots (penalized ONUs go
// with the saturated side), and both halves recurse independently.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fdos/model.hpp"
#include "fdos/transport.hpp"

namespace fdos {

struct Partition {
  int level = 0;
  int cap = 0;                              // b of the level that failed
  std::map<int, std::vector<int>> members;  // slot -> rows placed on arcs (M_j)
  std::vector<int> unassigned;              // rows placed off their arcs (U_s)
  std::vector<int> underfull_slots;         // L
  std::vector<int> saturated_slots;         // O
  std::vector<int> underfull_onus;          // N_L
  std::vector<int> saturated_onus;          // N_O
};

struct FdosResult {
  Assignment assignment;
  int recursion_depth = 0;
  std::vector<Partition> partitions;
  std::vector<int> solves_per_level;  // transport solves (strict + penalized) per level
  bool first_level_feasible = false;
};

inline int ceil_ratio(int a, int b) { return static_cast<int>(ceil_div(std::int64_t{a}, std::int64_t{b})); }

// Splits `slots` and `rows` from a penalized solve at uniform cap `cap`.
// Rows/slots are problem rows and slot ids; the penalized solution indexes
// them locally in the given order.
inline Partition partition(const AssignmentProblem& p, const std::vector<int>& rows,
                           const std::vector<int>& slots, int cap, const PenalizedSolution& pen) {
  if (pen.unassigned.empty()) throw PreconditionError("partition requires at least one off-arc ONU");
  Partition part;
  part.cap = cap;
  for (int s : slots) part.members[s];
  std::vector<char> off_arc(rows.size(), 0);
  for (int k : pen.unassigned) {
    off_arc[k] = 1;
    part.unassigned.push_back(rows[k]);
  }
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (!off_arc[k]) part.members[slots[pen.solution.col_of[k]]].push_back(rows[k]);

  std::set<int> underfull;
  for (const auto& [s, m] : part.members)
    if (static_cast<int>(m.size()) < cap) underfull.insert(s);

  auto reaches_underfull = [&](int row) {
    for (int s : p.arcs[row])
      if (underfull.count(s)) return true;
    return false;
  };
  for (bool grew = true; grew;) {
    grew = false;
    for (int s : slots) {
      if (underfull.count(s)) continue;
      for (int row : part.members[s]) {
        if (reaches_underfull(row)) {
          underfull.insert(s);
          grew = true;
          break;
        }
      }
    }
  }

  for (int s : slots) {
    auto& members = part.members[s];
    if (underfull.count(s)) {
      part.underfull_slots.push_back(s);
      part.underfull_onus.insert(part.underfull_onus.end(), members.begin(), members.end());
    } else {
      part.saturated_slots.push_back(s);
      part.saturated_onus.insert(part.saturated_onus.end(), members.begin(), members.end());
    }
  }
  part.saturated_onus.insert(part.saturated_onus.end(), part.unassigned.begin(), part.unassigned.end());
  std::sort(part.underfull_onus.begin(), part.underfull_onus.end());
  std::sort(part.saturated_onus.begin(), part.saturated_onus.end());
  return part;
}

namespace detail {

class FdosRunner {
 public:
  explicit FdosRunner(const AssignmentProblem& p) : p_(p) {
    result_.assignment.slot_of.assign(p.num_onus(), -1);
  }

  FdosResult run() {
    std::vector<int> rows(p_.num_onus());
    for (int i = 0; i < p_.num_onus(); ++i) rows[i] = i;
    solve(rows, p_.slots, 1);
    return std::move(result_);
  }

 private:
  void count_solve(int level) {
    if (static_cast<int>(result_.solves_per_level.size()) < level) result_.solves_per_level.resize(level, 0);
    ++result_.solves_per_level[level - 1];
  }

  void solve(const std::vector<int>& rows, const std::vector<int>& slots, int level) {
    if (rows.empty()) return;
    result_.recursion_depth = std::max(result_.recursion_depth, level);
    const int cap = ceil_ratio(static_cast<int>(rows.size()), static_cast<int>(slots.size()));
    count_solve(level);
    const auto strict = solve_strict(make_transport(p_, rows, slots, cap, TransportMode::Strict));
    if (strict.feasible()) {
      if (level == 1) result_.first_level_feasible = true;
      for (std::size_t k = 0; k < rows.size(); ++k) result_.assignment.slot_of[rows[k]] = slots[strict.col_of[k]];
      return;
    }
    count_solve(level);
    const auto pen = solve_penalized(make_transport(p_, rows, slots, cap, TransportMode::Penalized));
    Partition part = partition(p_, rows, slots, cap, pen);
    part.level = level;
    if (part.underfull_slots.empty() || part.saturated_slots.empty()) {
      std::string ids;
      for (int r : part.unassigned) ids += " " + std::to_string(p_.onu_ids[r]);
      throw Error("FDOS partition produced an empty side at level " + std::to_string(level) +
                  "; off-arc ONUs:" + ids);
    }
    result_.partitions.push_back(part);
    solve(part.underfull_onus, part.underfull_slots, level + 1);
    solve(part.saturated_onus, part.saturated_slots, level + 1);
  }

  const AssignmentProblem& p_;
  FdosResult result_;
};

}  // namespace detail

inline FdosResult fdos(const AssignmentProblem& p) {
  p.validate();
  std::vector<int> empty;
  for (int i = 0; i < p.num_onus(); ++i)
    if (p.arcs[i].empty()) empty.push_back(p.onu_ids[i]);
  if (!empty.empty()) throw InputError("ONUs without feasible slots", empty);
  return detail::FdosRunner(p).run();
}

// Lower bound on f1 for N ONUs spread over M slots: k slots at b-1, M-k at b.
inline std::int64_t balanced_f1_lower_bound(std::int64_t onus, std::int64_t slots) {
  if (onus < 1 || slots < 1) throw PreconditionError("lower bound needs N >= 1 and M >= 1");
  const std::int64_t b = ceil_div(onus, slots);
  const std::int64_t k = slots * b - onus;
  return k * (b - 1) * (b - 1) + (slots - k) * b * b;
}

// Upper bound on f1 of any assignment with at most b ONUs per slot.
inline std::int64_t capped_f1_upper_bound(std::int64_t onus, std::int64_t b) {
  if (b < 1) throw PreconditionError("upper bound needs b >= 1");
  const std::int64_t full = onus / b;
  const std::int64_t rest = onus - full * b;
  return full * b * b + rest * rest;
}

// Relative excess (f_hat - f_opt) / f_opt as an exact rational.
inline Rational approximation_ratio(std::int64_t fdos_value, std::int64_t optimum) {
  if (optimum == 0) throw UndefinedInput("approximation ratio undefined for a zero optimum");
  return Rational(fdos_value - optimum, optimum);
}

}  // namespace fdos
