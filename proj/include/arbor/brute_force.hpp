#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "arbor/bipartite.hpp"
#include "arbor/digraph.hpp"
#include "arbor/errors.hpp"

// Ground-truth exhaustive searches. Everything here works from first
// principles (in-degrees, parent walks, root counts) and never evaluates the
// cut-style feasibility formulas it is used to cross-check.

namespace arbor {

struct SearchBudget {
  long long max_nodes = 50'000'000;
  std::chrono::milliseconds time_limit{120'000};
};

enum class BfStatus { feasible, infeasible, budget_exceeded };

namespace bf_detail {

struct Ticker {
  long long nodes = 0;
  long long max_nodes;
  std::chrono::steady_clock::time_point deadline;
  bool exhausted = false;

  explicit Ticker(const SearchBudget& b)
      : max_nodes(b.max_nodes), deadline(std::chrono::steady_clock::now() + b.time_limit) {
    if (b.max_nodes <= 0) throw InputError("budget must be positive");
  }
  // Returns false once the budget is gone.
  bool tick() {
    if (exhausted) return false;
    if (++nodes > max_nodes || (nodes % 4096 == 0 && std::chrono::steady_clock::now() > deadline))
      exhausted = true;
    return !exhausted;
  }
};

// True iff making `tail` the parent of `head` closes a directed cycle.
inline bool closes_cycle(const int* parent, int tail, int head, int n) {
  int u = tail;
  for (int steps = 0; steps <= n && u != -1; ++steps) {
    if (u == head) return true;
    u = parent[u];
  }
  return false;
}

}  // namespace bf_detail

struct BfCompletion {
  BfStatus status = BfStatus::infeasible;
  std::vector<ArcSet> added;  // per forest, the arcs a witness assigns to it
};

// Depth-first assignment of every unused arc to one of the forests or to
// none, accepting exactly the leaves where all forests span and the active
// bounds hold. First witness in scan order (arcs by id, forests ascending,
// then none) is returned.
inline BfCompletion bf_feasible_completion(const ForestState& st, SearchBudget budget = {}) {
  const Digraph& d = st.inst.graph;
  int n = d.vertex_count();
  int k = st.k();
  int root = st.inst.root;

  std::vector<int> cand;
  for (int e : st.residual_arcs()) cand.push_back(e);

  // parent[i][v]: tail of the unique arc of forest i entering v, or -1
  std::vector<std::vector<int>> parent(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int i = 0; i < k; ++i)
    for (int e : st.forests[i].arcs) parent[i][d.arc(e).head] = d.arc(e).tail;
  std::vector<int> part_deg(static_cast<std::size_t>(st.part_count()), 0);
  std::vector<int> part_of(static_cast<std::size_t>(k), -1);
  for (int a = 0; a < st.part_count(); ++a)
    for (int i : st.parts[a]) part_of[i] = a;
  for (int a = 0; a < st.part_count(); ++a) part_deg[a] = st.part_root_degree(a);

  std::vector<ArcSet> chosen(static_cast<std::size_t>(k));
  bf_detail::Ticker ticker(budget);
  BfCompletion out;

  auto accept = [&]() {
    for (int i = 0; i < k; ++i)
      for (int v = 0; v < n; ++v)
        if (v != root && parent[i][v] == -1) return false;
    for (int a = 0; a < st.part_count(); ++a) {
      if (st.lower_active() && part_deg[a] < (*st.lower)[a]) return false;
      if (st.upper_active() && part_deg[a] > (*st.upper)[a]) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (!ticker.tick()) return false;
    if (idx == cand.size()) {
      if (!accept()) return false;
      out.added = chosen;
      return true;
    }
    const Arc& a = d.arc(cand[idx]);
    for (int i = 0; i < k; ++i) {
      if (a.head == root || parent[i][a.head] != -1) continue;
      if (bf_detail::closes_cycle(parent[i].data(), a.tail, a.head, n)) continue;
      bool is_root_arc = a.tail == root;
      int pa = part_of[i];
      if (is_root_arc && st.upper_active() && part_deg[pa] + 1 > (*st.upper)[pa]) continue;
      parent[i][a.head] = a.tail;
      chosen[i] = chosen[i].with(cand[idx]);
      if (is_root_arc) ++part_deg[pa];
      if (self(self, idx + 1)) return true;
      if (is_root_arc) --part_deg[pa];
      chosen[i] = chosen[i].without(cand[idx]);
      parent[i][a.head] = -1;
    }
    return self(self, idx + 1);  // leave the arc unused
  };

  bool found = rec(rec, 0);
  if (found) {
    out.status = BfStatus::feasible;
  } else {
    out.status = ticker.exhausted ? BfStatus::budget_exceeded : BfStatus::infeasible;
    out.added.clear();
  }
  return out;
}

// Constraints for exhaustive branching searches. Per-part root-count windows;
// forced roots must keep in-degree zero in their class; exact root sets pin
// the whole root set. With must_cover every arc gets a class, otherwise arcs
// may stay unused.
struct BranchingConstraints {
  bool must_cover = true;
  std::vector<IndexSet> parts;  // partition of [k]; empty means singletons
  std::vector<int> part_root_lo, part_root_hi;
  std::vector<VertexSet> forced_roots;               // per class, may be empty
  std::optional<std::vector<VertexSet>> exact_roots;  // per class
};

struct BfBranchings {
  BfStatus status = BfStatus::infeasible;
  std::vector<ArcSet> classes;
};

inline BfBranchings bf_feasible_decomposition(const Digraph& d, int k,
                                              const BranchingConstraints& cons,
                                              SearchBudget budget = {}) {
  int n = d.vertex_count();
  std::vector<IndexSet> parts = cons.parts;
  if (parts.empty())
    for (int i = 0; i < k; ++i) parts.push_back(IndexSet::single(i));
  int l = static_cast<int>(parts.size());
  std::vector<int> lo = cons.part_root_lo, hi = cons.part_root_hi;
  if (lo.empty()) lo.assign(static_cast<std::size_t>(l), 0);
  if (hi.empty()) hi.assign(static_cast<std::size_t>(l), n);
  std::vector<VertexSet> forced = cons.forced_roots;
  if (forced.empty()) forced.assign(static_cast<std::size_t>(k), VertexSet{});
  std::vector<int> part_of(static_cast<std::size_t>(k), -1);
  for (int a = 0; a < l; ++a)
    for (int i : parts[a]) part_of[i] = a;

  std::vector<std::vector<int>> parent(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(n), -1));
  // roots-so-far per part; only ever shrinks as arcs are placed
  std::vector<int> part_roots(static_cast<std::size_t>(l), 0);
  for (int a = 0; a < l; ++a) part_roots[a] = parts[a].count() * n;

  std::vector<ArcSet> chosen(static_cast<std::size_t>(k));
  bf_detail::Ticker ticker(budget);
  BfBranchings out;

  auto accept = [&]() {
    for (int a = 0; a < l; ++a)
      if (part_roots[a] < lo[a] || part_roots[a] > hi[a]) return false;
    for (int i = 0; i < k; ++i) {
      if (cons.exact_roots) {
        VertexSet roots;
        for (int v = 0; v < n; ++v)
          if (parent[i][v] == -1) roots = roots.with(v);
        if (roots != (*cons.exact_roots)[i]) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, int arc_id) -> bool {
    if (!ticker.tick()) return false;
    if (arc_id == d.arc_count()) {
      if (!accept()) return false;
      out.classes = chosen;
      return true;
    }
    const Arc& a = d.arc(arc_id);
    for (int i = 0; i < k; ++i) {
      if (parent[i][a.head] != -1) continue;
      if (forced[i].contains(a.head)) continue;
      if (cons.exact_roots && (*cons.exact_roots)[i].contains(a.head)) continue;
      if (bf_detail::closes_cycle(parent[i].data(), a.tail, a.head, n)) continue;
      int pa = part_of[i];
      if (part_roots[pa] - 1 < lo[pa]) continue;  // roots only ever shrink
      parent[i][a.head] = a.tail;
      --part_roots[pa];
      chosen[i] = chosen[i].with(arc_id);
      if (self(self, arc_id + 1)) return true;
      chosen[i] = chosen[i].without(arc_id);
      ++part_roots[pa];
      parent[i][a.head] = -1;
    }
    if (!cons.must_cover) return self(self, arc_id + 1);
    return false;
  };

  bool found = rec(rec, 0);
  if (found) {
    out.status = BfStatus::feasible;
  } else {
    out.status = ticker.exhausted ? BfStatus::budget_exceeded : BfStatus::infeasible;
    out.classes.clear();
  }
  return out;
}

struct BfCover {
  BfStatus status = BfStatus::infeasible;
  std::vector<std::pair<int, int>> edges;
};

// Enumerates additional edge sets slot by slot (excluding first), respecting
// the caps, and accepts leaves where the combined graph covers the table.
inline BfCover bf_cover(const BipartiteInstance& inst, SearchBudget budget = {}) {
  std::vector<std::pair<int, int>> slots;
  for (int s = 0; s < inst.s_size; ++s)
    for (int t = 0; t < inst.t_size; ++t)
      if (std::find(inst.edges0.begin(), inst.edges0.end(), std::make_pair(s, t)) ==
          inst.edges0.end())
        slots.emplace_back(s, t);

  std::vector<SSet> nbr(static_cast<std::size_t>(inst.t_size));
  for (auto [s, t] : inst.edges0) nbr[t] = nbr[t].with(s);
  std::vector<int> cap = inst.g;
  std::vector<std::pair<int, int>> picked;
  bf_detail::Ticker ticker(budget);
  BfCover out;

  auto covers = [&]() {
    bool ok = true;
    for_each_nonempty_subset(TSet::full(inst.t_size), [&](TSet t0) {
      SSet gamma;
      for (int t : t0) gamma = gamma | nbr[t];
      if (gamma.count() < inst.requirement(t0)) {
        ok = false;
        return false;
      }
      return true;
    });
    return ok;
  };

  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (!ticker.tick()) return false;
    if (idx == slots.size()) {
      if (!covers()) return false;
      out.edges = picked;
      return true;
    }
    if (self(self, idx + 1)) return true;  // skip the slot
    auto [s, t] = slots[idx];
    if (cap[t] == 0 || nbr[t].contains(s)) return false;
    nbr[t] = nbr[t].with(s);
    --cap[t];
    picked.push_back(slots[idx]);
    bool hit = self(self, idx + 1);
    picked.pop_back();
    ++cap[t];
    nbr[t] = nbr[t].without(s);
    return hit;
  };

  bool found = rec(rec, 0);
  if (found) {
    out.status = BfStatus::feasible;
  } else {
    out.status = ticker.exhausted ? BfStatus::budget_exceeded : BfStatus::infeasible;
    out.edges.clear();
  }
  return out;
}

}  // namespace arbor
