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

// Random window instances for property tests, the acceptance campaign and the
// `gen` command.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fdos/errors.hpp"
#include "fdos/fdos.hpp"
#include "fdos/rng.hpp"
#include "fdos/windows.hpp"

namespace fdos {

struct GeneratedInstance {
  int first_slot = 1;
  int num_slots = 0;
  std::vector<SlotInterval> windows;
  std::vector<std::int64_t> onu_weight;  // empty: all ones

  AssignmentProblem problem() const {
    ProblemOptions opt;
    opt.onu_weight = onu_weight;
    return problem_from_intervals(windows, first_slot, num_slots, opt);
  }
};

struct GenOptions {
  double forced_fraction = 0.2;
  int max_onu_weight = 1;  // w_i drawn from [1, max]
  int max_width = 0;       // 0: unrestricted window widths
  bool require_feasible_first_level = false;
  int rejection_budget = 10000;
};

inline bool first_level_feasible(const AssignmentProblem& p) {
  std::vector<int> rows(p.num_onus());
  for (int i = 0; i < p.num_onus(); ++i) rows[i] = i;
  const int b = ceil_ratio(p.num_onus(), p.num_slots());
  return solve_strict(make_transport(p, rows, p.slots, b, TransportMode::Strict)).feasible();
}

inline GeneratedInstance draw_instance(CounterRng& rng, int onus, int slots, const GenOptions& opt) {
  GeneratedInstance g;
  g.num_slots = slots;
  const int first = g.first_slot, last = g.first_slot + slots - 1;
  for (int i = 0; i < onus; ++i) {
    if (rng.bernoulli(opt.forced_fraction)) {
      const int s = static_cast<int>(rng.uniform_int(first, last));
      g.windows.push_back({s, s, true});
      continue;
    }
    int lb = static_cast<int>(rng.uniform_int(first, last));
    int ub = static_cast<int>(rng.uniform_int(first, last));
    if (lb > ub) std::swap(lb, ub);
    if (opt.max_width > 0 && ub - lb + 1 > opt.max_width) ub = lb + opt.max_width - 1;
    g.windows.push_back({lb, ub, false});
  }
  if (opt.max_onu_weight > 1) {
    for (int i = 0; i < onus; ++i) g.onu_weight.push_back(rng.uniform_int(1, opt.max_onu_weight));
  }
  return g;
}

// Draws until the instance passes the requested filter.
inline GeneratedInstance generate_instance(int onus, int slots, std::uint64_t seed, const GenOptions& opt = {}) {
  if (onus < 1 || slots < 1) throw PreconditionError("generator needs N >= 1 and M >= 1");
  CounterRng rng(seed, 0x6e6e);
  for (int attempt = 0; attempt < opt.rejection_budget; ++attempt) {
    GeneratedInstance g = draw_instance(rng, onus, slots, opt);
    if (!opt.require_feasible_first_level || first_level_feasible(g.problem())) return g;
  }
  throw BudgetExceeded(opt.rejection_budget, opt.rejection_budget);
}

}  // namespace fdos
