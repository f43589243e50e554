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

// Capacitated max-weight assignment of rows (ONUs, supply 1 each) to columns
// (slots, capacity U_j each). Solved as a min-cost flow with successive
// shortest paths; the flow formulation absorbs unused column capacity, which
// plays the role of the zero-weight dummy row of the balanced transportation
// problem.
//
// Strict mode only uses the listed arcs. Penalized mode is complete bipartite:
// listed arcs keep their weight, every other pair costs -H, so an optimum
// first minimises the number of off-arc rows and then maximises arc weight.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "fdos/model.hpp"

namespace fdos {

enum class TransportMode { Strict, Penalized };

struct TransportArc {
  int row;
  int col;
  std::int64_t weight;
};

struct TransportInstance {
  int rows = 0;
  std::vector<int> caps;  // per column
  std::vector<TransportArc> arcs;
  TransportMode mode = TransportMode::Strict;
  std::int64_t penalty = 0;  // H, penalized mode only

  int cols() const { return static_cast<int>(caps.size()); }
};

enum class TransportStatus { Feasible, Infeasible };

struct TransportSolution {
  TransportStatus status = TransportStatus::Infeasible;
  std::vector<int> col_of;  // per row, -1 when infeasible
  std::int64_t objective = 0;
  std::vector<int> usage;   // per column

  bool feasible() const { return status == TransportStatus::Feasible; }
};

struct PenalizedSolution {
  TransportSolution solution;
  std::vector<int> unassigned;  // rows placed on a non-arc pair (U_s)
};

namespace detail {

// Successive-shortest-path min-cost flow for the bipartite shape
// source -> rows -> cols -> sink. Costs must be non-negative. Edges are
// added first; run() freezes them into a flat adjacency.
class BipartiteFlow {
 public:
  BipartiteFlow(int rows, int cols) : rows_(rows), cols_(cols), n_(rows + cols + 2) {
    edges_.reserve(2 * (rows + cols) + 2 * static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) add_edge(source(), row_node(r), 1, 0);
  }

  void set_cap(int c, int cap) { add_edge(col_node(c), sink(), cap, 0); }

  int add_pair(int r, int c, std::int64_t cost) { return add_edge(row_node(r), col_node(c), 1, cost); }

  // Pushes up to `want` units; returns how many were routed.
  int run(int want) {
    build_adjacency();
    std::vector<std::int64_t> pot(n_, 0), dist(n_);
    std::vector<int> prev_edge(n_);
    std::vector<char> done(n_);
    using Item = std::pair<std::int64_t, int>;
    std::vector<Item> heap;
    heap.reserve(edges_.size() + 1);
    const auto later = std::greater<Item>();
    int flow = 0;
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    while (flow < want) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(done.begin(), done.end(), 0);
      std::fill(prev_edge.begin(), prev_edge.end(), -1);
      heap.clear();
      dist[source()] = 0;
      heap.push_back({0, source()});
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), later);
        const auto [d, u] = heap.back();
        heap.pop_back();
        if (done[u] || d != dist[u]) continue;
        done[u] = 1;
        if (u == sink()) break;
        for (int k = adj_start_[u]; k < adj_start_[u + 1]; ++k) {
          const int e = adj_[k];
          const Edge& ed = edges_[e];
          if (ed.cap <= 0 || done[ed.to]) continue;
          const std::int64_t nd = d + ed.cost + pot[u] - pot[ed.to];
          // Ties go to the lower edge id so the result does not depend on
          // heap internals.
          if (nd < dist[ed.to] || (nd == dist[ed.to] && e < prev_edge[ed.to])) {
            dist[ed.to] = nd;
            prev_edge[ed.to] = e;
            heap.push_back({nd, ed.to});
            std::push_heap(heap.begin(), heap.end(), later);
          }
        }
      }
      if (dist[sink()] >= kInf) break;
      // Unsettled nodes are shifted by the sink distance, which keeps every
      // residual reduced cost non-negative.
      for (int v = 0; v < n_; ++v) pot[v] += done[v] ? dist[v] : dist[sink()];
      for (int v = sink(); v != source();) {
        const int e = prev_edge[v];
        edges_[e].cap -= 1;
        edges_[e ^ 1].cap += 1;
        v = edges_[e ^ 1].to;
      }
      ++flow;
    }
    return flow;
  }

  bool used(int edge) const { return edges_[edge].cap == 0; }

 private:
  struct Edge {
    int from;
    int to;
    int cap;
    std::int64_t cost;
  };

  int source() const { return 0; }
  int sink() const { return n_ - 1; }
  int row_node(int r) const { return 1 + r; }
  int col_node(int c) const { return 1 + rows_ + c; }

  int add_edge(int u, int v, int cap, std::int64_t cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({u, v, cap, cost});
    edges_.push_back({v, u, 0, -cost});
    return id;
  }

  // Per-node edge lists in edge-id order.
  void build_adjacency() {
    adj_start_.assign(n_ + 1, 0);
    for (const auto& e : edges_) ++adj_start_[e.from + 1];
    for (int v = 0; v < n_; ++v) adj_start_[v + 1] += adj_start_[v];
    adj_.assign(edges_.size(), 0);
    std::vector<int> fill(adj_start_.begin(), adj_start_.end() - 1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) adj_[fill[edges_[e].from]++] = e;
  }

  int rows_, cols_, n_;
  std::vector<Edge> edges_;
  std::vector<int> adj_start_;
  std::vector<int> adj_;
};

inline void check_instance(const TransportInstance& inst) {
  if (inst.rows < 0) throw InputError("negative row count");
  for (int c : inst.caps)
    if (c < 0) throw InputError("column caps must be non-negative");
  for (const auto& a : inst.arcs)
    if (a.row < 0 || a.row >= inst.rows || a.col < 0 || a.col >= inst.cols())
      throw InputError("transport arc out of range");
}

// Dense row-major (rows x cols) weights; `present` marks usable pairs.
struct PairTable {
  int cols = 0;
  std::vector<std::int64_t> w;
  std::vector<char> present;

  PairTable(int rows, int cols_, std::int64_t fill, char usable)
      : cols(cols_), w(static_cast<std::size_t>(rows) * cols_, fill),
        present(static_cast<std::size_t>(rows) * cols_, usable) {}

  std::size_t at(int r, int c) const { return static_cast<std::size_t>(r) * cols + c; }
};

inline TransportSolution solve_with_pairs(const TransportInstance& inst, const PairTable& t) {
  const int n = inst.rows, m = inst.cols();
  std::int64_t wmax = 0;
  for (std::size_t k = 0; k < t.w.size(); ++k)
    if (t.present[k]) wmax = std::max(wmax, t.w[k]);
  BipartiteFlow flow(n, m);
  for (int c = 0; c < m; ++c) flow.set_cap(c, inst.caps[c]);
  std::vector<int> edge(t.w.size(), -1);
  // Every row carries exactly one unit, so shifting all costs by wmax keeps
  // the optimum and makes them non-negative.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c)
      if (t.present[t.at(r, c)]) edge[t.at(r, c)] = flow.add_pair(r, c, wmax - t.w[t.at(r, c)]);
  TransportSolution sol;
  sol.usage.assign(m, 0);
  sol.col_of.assign(n, -1);
  if (flow.run(n) < n) return sol;
  sol.status = TransportStatus::Feasible;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c)
      if (edge[t.at(r, c)] >= 0 && flow.used(edge[t.at(r, c)])) {
        sol.col_of[r] = c;
        ++sol.usage[c];
        sol.objective = checked_add(sol.objective, t.w[t.at(r, c)]);
      }
  return sol;
}

}  // namespace detail

// Exact optimum of the capacitated assignment restricted to the listed arcs,
// or Infeasible when no cap-respecting total assignment exists.
inline TransportSolution solve_strict(const TransportInstance& inst) {
  if (inst.mode != TransportMode::Strict) throw PreconditionError("solve_strict needs a strict instance");
  detail::check_instance(inst);
  detail::PairTable t(inst.rows, inst.cols(), 0, 0);
  for (const auto& a : inst.arcs) {
    const auto k = t.at(a.row, a.col);
    if (t.present[k]) throw InputError("duplicate transport arc");
    t.present[k] = 1;
    t.w[k] = a.weight;
  }
  return detail::solve_with_pairs(inst, t);
}

// Always-feasible variant over the complete bipartite graph with weight -H on
// pairs outside the arc list.
inline PenalizedSolution solve_penalized(const TransportInstance& inst) {
  if (inst.mode != TransportMode::Penalized) throw PreconditionError("solve_penalized needs a penalized instance");
  detail::check_instance(inst);
  const int n = inst.rows, m = inst.cols();
  std::int64_t cap_sum = 0;
  for (int c : inst.caps) cap_sum += c;
  if (cap_sum < n) throw InputError("column capacity below row count; no total assignment exists");
  std::int64_t arc_sum = 0;
  for (const auto& a : inst.arcs) arc_sum = checked_add(arc_sum, a.weight);
  if (inst.penalty <= arc_sum) throw InputError("penalty H must exceed the sum of arc weights");
  detail::PairTable t(n, m, -inst.penalty, 1);
  std::vector<char> in_arcs(static_cast<std::size_t>(n) * m, 0);
  for (const auto& a : inst.arcs) {
    const auto k = t.at(a.row, a.col);
    if (in_arcs[k]) throw InputError("duplicate transport arc");
    in_arcs[k] = 1;
    t.w[k] = a.weight;
  }
  PenalizedSolution out;
  out.solution = detail::solve_with_pairs(inst, t);
  for (int r = 0; r < n; ++r)
    if (!in_arcs[t.at(r, out.solution.col_of[r])]) out.unassigned.push_back(r);
  return out;
}

// Transport instance over a subset of a problem's rows and slots with a
// uniform cap; local row k is rows[k], local column c is slots[c].
inline TransportInstance make_transport(const AssignmentProblem& p, const std::vector<int>& rows,
                                        const std::vector<int>& slots, int cap, TransportMode mode) {
  TransportInstance inst;
  inst.rows = static_cast<int>(rows.size());
  inst.caps.assign(slots.size(), cap);
  inst.mode = mode;
  inst.penalty = p.penalty;
  for (int k = 0; k < inst.rows; ++k) {
    const int r = rows[k];
    for (int s : p.arcs[r]) {
      auto it = std::lower_bound(slots.begin(), slots.end(), s);
      if (it == slots.end() || *it != s) continue;
      inst.arcs.push_back({k, static_cast<int>(it - slots.begin()), p.weight(r, s)});
    }
  }
  return inst;
}

}  // namespace fdos
