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

// Exhaustive minimiser of f = W*f1 - f2 over the Cartesian product of each
// ONU's arc list. Ground truth for desk-sized instances only.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "fdos/model.hpp"

namespace fdos {

struct OracleOptions {
  double budget = 1e7;  // max product of arc-list lengths
  bool prune = true;
};

struct OracleResult {
  bool feasible = false;
  Assignment best;
  std::int64_t best_f = 0;
  std::int64_t best_f1 = 0;
  std::int64_t best_f2 = 0;
  std::uint64_t explored = 0;  // complete assignments evaluated
};

inline double search_space_size(const AssignmentProblem& p) {
  double prod = 1.0;
  for (const auto& a : p.arcs) prod *= static_cast<double>(a.size());
  return prod;
}

namespace detail {

class OracleSearch {
 public:
  OracleSearch(const AssignmentProblem& p, bool prune)
      : p_(p), prune_(prune), counts_(p.num_slots(), 0), current_(p.num_onus(), -1),
        max_rest_(p.num_onus() + 1, 0) {
    for (int i = p.num_onus() - 1; i >= 0; --i) {
      std::int64_t best = 0;
      for (int s : p.arcs[i]) best = std::max(best, p.weight(i, s));
      max_rest_[i] = checked_add(max_rest_[i + 1], best);
    }
  }

  OracleResult run() {
    dfs(0, 0, 0);
    return std::move(result_);
  }

 private:
  void dfs(int row, std::int64_t part_f1, std::int64_t part_f2) {
    const int n = p_.num_onus();
    if (row == n) {
      ++result_.explored;
      const std::int64_t val = objective(p_.big_weight, part_f1, part_f2);
      if (!result_.feasible || val < result_.best_f || (val == result_.best_f && part_f1 < result_.best_f1)) {
        result_.feasible = true;
        result_.best_f = val;
        result_.best_f1 = part_f1;
        result_.best_f2 = part_f2;
        result_.best.slot_of = current_;
      }
      return;
    }
    if (prune_ && result_.feasible) {
      // Each remaining ONU adds at least 1 to f1 and at most its best weight to f2.
      const std::int64_t bound = objective(p_.big_weight, part_f1 + (n - row), part_f2 + max_rest_[row]);
      if (bound >= result_.best_f) return;
    }
    for (int s : p_.arcs[row]) {
      const int c = p_.column_of(s);
      const std::int64_t grow = 2 * static_cast<std::int64_t>(counts_[c]) + 1;
      ++counts_[c];
      current_[row] = s;
      dfs(row + 1, part_f1 + grow, part_f2 + p_.weight(row, s));
      --counts_[c];
    }
    current_[row] = -1;
  }

  const AssignmentProblem& p_;
  bool prune_;
  std::vector<int> counts_;
  std::vector<int> current_;
  std::vector<std::int64_t> max_rest_;
  OracleResult result_;
};

}  // namespace detail

// Minimiser of f with ties broken by smaller f1, then by the lexicographically
// first assignment in slot order. Refuses instances above the budget.
inline OracleResult exact_solve(const AssignmentProblem& p, const OracleOptions& opt = {}) {
  for (const auto& a : p.arcs)
    if (a.empty()) return OracleResult{};
  const double size = search_space_size(p);
  if (size > opt.budget) throw BudgetExceeded(size, opt.budget);
  return detail::OracleSearch(p, opt.prune).run();
}

// True iff the exact optimum puts at most b ONUs on every slot.
inline bool optimum_within_cap(const AssignmentProblem& p, int b, const OracleOptions& opt = {}) {
  const auto res = exact_solve(p, opt);
  if (!res.feasible) return false;
  const auto counts = slot_counts(res.best, p);
  return *std::max_element(counts.begin(), counts.end()) <= b;
}

}  // namespace fdos
