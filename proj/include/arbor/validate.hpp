#pragma once

#include <string>
#include <vector>

#include "arbor/digraph.hpp"
#include "arbor/oracles.hpp"

// Independent validity checks applied to every solver output and certificate,
// in tests and in the corpus harness.

namespace arbor {

// A completion is valid when each output forest is a spanning arborescence
// with exactly |V| arcs extending its input, forests stay arc-disjoint, and
// the state's active bounds hold.
inline bool valid_completion(const ForestState& st, const std::vector<Arborescence>& out,
                             std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(out.size()) != st.k()) return fail("forest count changed");
  ArcSet seen;
  for (int i = 0; i < st.k(); ++i) {
    const Arborescence& f = out[i];
    if (f.root != st.inst.root) return fail("root changed");
    if (!st.forests[i].arcs.subset_of(f.arcs)) return fail("input forest not extended");
    if (!is_arborescence(st.inst.graph, f.root, f.arcs)) return fail("not an arborescence");
    if (f.vertices(st.inst.graph) != st.inst.graph.vertices()) return fail("not spanning");
    if (f.arcs.count() != st.inst.ground().count()) return fail("arc count is not |V|");
    if (f.arcs.intersects(seen)) return fail("forests share an arc");
    seen = seen | f.arcs;
  }
  for (int a = 0; a < st.part_count(); ++a) {
    int deg = 0;
    for (int i : st.parts[a]) deg += out_degree(st.inst.graph, out[i].arcs, st.inst.root);
    if (st.lower_active() && deg < (*st.lower)[a]) return fail("lower bound missed");
    if (st.upper_active() && deg > (*st.upper)[a]) return fail("upper bound exceeded");
  }
  return true;
}

// Arc-disjoint branchings over D; optionally they must cover every arc.
inline bool valid_branchings(const Digraph& d, const std::vector<ArcSet>& bs, bool must_cover,
                             std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  ArcSet seen;
  for (ArcSet b : bs) {
    if (!is_branching(d, b)) return fail("class is not a branching");
    if (b.intersects(seen)) return fail("classes share an arc");
    seen = seen | b;
  }
  if (must_cover && seen != d.arcs()) return fail("classes do not cover the arc set");
  return true;
}

// ---------------------------------------------------------------------------
// Certificate re-verification: recompute both sides of the named inequality
// and confirm the recorded numbers and the violation direction.
// ---------------------------------------------------------------------------

namespace detail {

inline bool sides_match(const ViolationCertificate& c, Sides s, bool upper_style) {
  if (c.lhs != s.lhs || c.rhs != s.rhs) return false;
  return upper_style ? s.lhs > s.rhs : s.lhs < s.rhs;
}

// Recovers the part mask whose parts union to exactly the certificate's
// index set.
inline std::optional<PartSet> parts_of_union(const std::vector<IndexSet>& parts, IndexSet target) {
  PartSet ps;
  IndexSet seen;
  for (std::size_t a = 0; a < parts.size(); ++a)
    if (parts[a].subset_of(target)) {
      ps = ps.with(static_cast<int>(a));
      seen = seen | parts[a];
    }
  if (seen != target) return std::nullopt;
  return ps;
}

}  // namespace detail

// Conditions evaluated against a forest state.
inline bool reverify_on_state(const ForestState& st, const ViolationCertificate& c) {
  if (c.condition == "cond11") {
    if (c.family.size() != 1) return false;
    return detail::sides_match(c, eval_completion_cut(st, st.residual_arcs(), c.family[0]), false);
  }
  if (c.condition == "cond54r") {
    if (c.family.size() != 1) return false;
    return detail::sides_match(c, eval_cond54r(st, c.family[0]), false);
  }
  if (c.condition == "cond4") {
    if (!st.lower_active()) return false;
    auto ps = detail::parts_of_union(st.parts, c.index_union);
    return ps && detail::sides_match(c, eval_cond4(st, c.family, *ps), false);
  }
  if (c.condition == "cond22") {
    if (!st.upper_active()) return false;
    auto ps = detail::parts_of_union(st.parts, c.index_union);
    return ps && detail::sides_match(c, eval_cond22(st, c.family, *ps), true);
  }
  return false;
}

inline bool reverify_cond2(const PrescribedInstance& in, const ViolationCertificate& c) {
  if (c.condition != "cond2") return false;
  auto ps = detail::parts_of_union(in.parts, c.index_union);
  return ps && detail::sides_match(c, eval_cond2(in, c.family, *ps), true);
}

inline bool reverify_edmonds(const Digraph& d, const std::vector<VertexSet>& rootsets,
                             const ViolationCertificate& c) {
  if (c.condition != "edmonds" || c.family.size() != 1) return false;
  return detail::sides_match(c, eval_edmonds(d, rootsets, c.family[0]), false);
}

inline bool reverify_spanning(const Digraph& d, int k, const ViolationCertificate& c) {
  if (c.condition != "spanning") return false;
  return detail::sides_match(c, eval_spanning_pack(d, k, c.family), false);
}

inline bool reverify_cai_frank(const Digraph& d, int k, const std::vector<int>& f,
                               const std::vector<int>& g, const ViolationCertificate& c) {
  if (c.condition == "cai_frank_i") {
    long long total = 0;
    for (int v = 0; v < d.vertex_count(); ++v) total += f[v];
    return c.lhs == total && c.rhs == k && c.lhs > c.rhs;
  }
  if (c.condition == "cai_frank_ii") {
    Sides s;
    VertexSet rest = d.vertices();
    for (VertexSet x : c.family) {
      s.lhs += in_degree(d, d.arcs(), x);
      rest = rest - x;
    }
    s.rhs = static_cast<long long>(k) * (static_cast<long long>(c.family.size()) - 1);
    for (int v : rest) s.rhs += f[v];
    return detail::sides_match(c, s, false);
  }
  if (c.condition == "cai_frank_iii") {
    if (c.family.size() != 1) return false;
    long long gx = 0;
    for (int v : c.family[0]) gx += g[v];
    Sides s{gx, k - in_degree(d, d.arcs(), c.family[0])};
    return detail::sides_match(c, s, false);
  }
  return false;
}

inline bool reverify_decompose(const Digraph& d, int k, int c_min,
                               const ViolationCertificate& c) {
  if (c.family.size() != 1) return false;
  VertexSet h = c.family[0];
  if (c.condition == "max_indegree")
    return h.count() == 1 && c.lhs == in_degree(d, d.arcs(), h) && c.rhs == k && c.lhs > c.rhs;
  if (c.condition == "arboricity") {
    long long inside = 0;
    for (int e = 0; e < d.arc_count(); ++e)
      if (h.contains(d.arc(e).tail) && h.contains(d.arc(e).head)) ++inside;
    return h.count() >= 2 && c.lhs == inside &&
           c.rhs == static_cast<long long>(k) * (h.count() - 1) && c.lhs > c.rhs;
  }
  if (c.condition == "arc_count")
    return h == d.vertices() && c.lhs == d.arc_count() &&
           c.rhs == static_cast<long long>(k) * (d.vertex_count() - c_min) && c.lhs > c.rhs;
  return false;
}

}  // namespace arbor
