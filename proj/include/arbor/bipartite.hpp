#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "arbor/digraph.hpp"
#include "arbor/errors.hpp"
#include "arbor/small_set.hpp"

namespace arbor {

struct SSideTag {};
struct TSideTag {};
using SSet = SmallSet<SSideTag>;
using TSet = SmallSet<TSideTag>;

// Simple bipartite covering instance: existing edges E0 between S and T, an
// explicit requirement table p on nonempty subsets of T, and per-t caps g on
// how many new edges may touch t. The table must be positively intersecting
// supermodular and never exceed |S|; both are verified on construction.
struct BipartiteInstance {
  int s_size = 0;
  int t_size = 0;
  std::vector<std::pair<int, int>> edges0;  // sorted, simple
  std::vector<int> p;                       // indexed by T-subset mask; p[0] = 0
  std::vector<int> g;

  SSet neighbors(TSet t0) const {
    SSet r;
    for (auto [s, t] : edges0)
      if (t0.contains(t)) r = r.with(s);
    return r;
  }
  int requirement(TSet t0) const { return p[t0.bits()]; }
};

inline BipartiteInstance make_bipartite_instance(int s_size, int t_size,
                                                 std::vector<std::pair<int, int>> edges0,
                                                 std::vector<int> p, std::vector<int> g,
                                                 int max_t = 16) {
  if (s_size < 0 || t_size < 0) throw InputError("negative side size");
  if (t_size > max_t) throw CapacityError("T side too large for an explicit table");
  if (static_cast<int>(p.size()) != (1 << t_size)) throw InputError("requirement table size mismatch");
  if (static_cast<int>(g.size()) != t_size) throw InputError("cap table size mismatch");
  std::sort(edges0.begin(), edges0.end());
  for (std::size_t i = 0; i < edges0.size(); ++i) {
    auto [s, t] = edges0[i];
    if (s < 0 || s >= s_size || t < 0 || t >= t_size) throw InputError("edge endpoint out of range");
    if (i > 0 && edges0[i] == edges0[i - 1]) throw InputError("duplicate edge");
  }
  for (int t = 0; t < t_size; ++t)
    if (g[t] < 0) throw InputError("negative cap");
  for (std::uint64_t m = 1; m < p.size(); ++m)
    if (p[m] > s_size) throw InputError("requirement exceeds |S|");
  p[0] = 0;
  // positively intersecting supermodularity, checked pair by pair
  for (std::uint64_t a = 1; a < p.size(); ++a)
    for (std::uint64_t b = a + 1; b < p.size(); ++b) {
      TSet x = TSet::of_bits(a), y = TSet::of_bits(b);
      if (!properly_intersecting(x, y)) continue;
      if (p[a] <= 0 || p[b] <= 0) continue;
      if (p[a] + p[b] > p[(x | y).bits()] + p[(x & y).bits()])
        throw InputError("requirement table is not positively intersecting supermodular");
    }
  return BipartiteInstance{s_size, t_size, std::move(edges0), std::move(p), std::move(g)};
}

// Violated covering condition, if any: the first nonempty T0 (ascending mask)
// with |Γ(T0)| + g~(T0) < p(T0).
inline std::optional<TSet> check_cond44(const BipartiteInstance& in) {
  std::optional<TSet> bad;
  for_each_nonempty_subset(TSet::full(in.t_size), [&](TSet t0) {
    long long lhs = in.neighbors(t0).count();
    for (int t : t0) lhs += in.g[t];
    if (lhs < in.requirement(t0)) {
      bad = t0;
      return false;
    }
    return true;
  });
  return bad;
}

struct CoverResult {
  std::optional<std::vector<std::pair<int, int>>> added;
  std::optional<TSet> violating;

  bool ok() const { return added.has_value(); }
};

// Constructive cover: while some t still has cap, either the cap is slack
// everywhere through t and can drop, or the maximal tight set through
// t pins a fresh neighbor s0 outside its current neighborhood. Edges
// accumulate; the covering condition is an invariant of the loop.
inline CoverResult cover_greedy(const BipartiteInstance& inst) {
  if (std::optional<TSet> bad = check_cond44(inst)) return CoverResult{std::nullopt, bad};
  std::vector<SSet> nbr(static_cast<std::size_t>(inst.t_size));
  for (auto [s, t] : inst.edges0) nbr[t] = nbr[t].with(s);
  std::vector<int> cap = inst.g;
  std::vector<std::pair<int, int>> added;

  auto gamma = [&](TSet t0) {
    SSet r;
    for (int t : t0) r = r | nbr[t];
    return r;
  };

  while (true) {
    int t0 = -1;
    for (int t = 0; t < inst.t_size && t0 < 0; ++t)
      if (cap[t] > 0) t0 = t;
    if (t0 < 0) break;

    TSet tight_union;
    bool any_tight = false;
    for_each_nonempty_subset(TSet::full(inst.t_size), [&](TSet s) {
      if (!s.contains(t0)) return true;
      long long lhs = gamma(s).count();
      for (int t : s) lhs += cap[t];
      long long need = inst.requirement(s);
      if (lhs < need) throw ContractError("covering condition lost during the greedy loop");
      if (lhs == need) {
        any_tight = true;
        tight_union = tight_union | s;
      }
      return true;
    });

    if (!any_tight) {
      --cap[t0];
      continue;
    }
    // the union of tight sets through t0 must itself be tight
    long long lhs = gamma(tight_union).count();
    for (int t : tight_union) lhs += cap[t];
    if (lhs != inst.requirement(tight_union))
      throw ContractError("union of tight sets through t0 is not tight");

    SSet seen = gamma(tight_union);
    int s0 = -1;
    for (int s = 0; s < inst.s_size && s0 < 0; ++s)
      if (!seen.contains(s)) s0 = s;
    if (s0 < 0) throw ContractError("no fresh neighbor although the requirement is below |S|");
    nbr[t0] = nbr[t0].with(s0);
    added.emplace_back(s0, t0);
    --cap[t0];
  }
  std::sort(added.begin(), added.end());
  return CoverResult{std::move(added), std::nullopt};
}

// The covering instance equivalent to completing the state's forests:
// S = forests, T = V, an edge where a forest already covers a vertex, the
// requirement k minus the non-root residual in-degree (clipped at zero), and
// caps given by unused parallel root arcs.
struct ReducedCover {
  BipartiteInstance instance;
  std::vector<int> t_vertex;  // dense T index -> vertex id
};

inline ReducedCover reduce_to_cover(const ForestState& st, int max_t = 16) {
  std::vector<int> t_vertex;
  for (int v : st.inst.ground()) t_vertex.push_back(v);
  int tn = static_cast<int>(t_vertex.size());
  int k = st.k();
  std::vector<std::pair<int, int>> e0;
  for (int i = 0; i < k; ++i)
    for (int ti = 0; ti < tn; ++ti)
      if (st.covered(i).contains(t_vertex[ti])) e0.emplace_back(i, ti);
  ArcSet nonroot = st.residual_nonroot_arcs();
  std::vector<int> p(std::size_t{1} << tn, 0);
  for (std::uint64_t m = 1; m < p.size(); ++m) {
    VertexSet x;
    for (int ti = 0; ti < tn; ++ti)
      if ((m >> ti) & 1) x = x.with(t_vertex[ti]);
    int val = k - in_degree(st.inst.graph, nonroot, x);
    p[m] = val > 0 ? val : 0;
  }
  std::vector<int> g(static_cast<std::size_t>(tn));
  for (int ti = 0; ti < tn; ++ti)
    g[ti] = root_arc_capacity(st, st.all_indices(), t_vertex[ti]);
  return ReducedCover{make_bipartite_instance(k, tn, std::move(e0), std::move(p), std::move(g), max_t),
                      std::move(t_vertex)};
}

}  // namespace arbor
