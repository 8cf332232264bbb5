#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arbor/digraph.hpp"
#include "arbor/set_family.hpp"
#include "arbor/small_set.hpp"

namespace arbor {

// Enumeration caps for the exact checkers; overridable per call.
struct OracleLimits {
  int max_single = 20;  // single-subset conditions enumerate 2^|V| sets
  int max_family = 10;  // family conditions enumerate all disjoint families
};

// A concrete witness of a failed feasibility inequality. Re-evaluating the
// named condition on (family, index_union) must reproduce lhs/rhs.
struct ViolationCertificate {
  std::string condition;
  std::vector<VertexSet> family;  // disjoint nonempty subsets; may be empty
  IndexSet index_union;           // forest indices, when the condition has an I
  long long lhs = 0;
  long long rhs = 0;
};

using CheckResult = std::optional<ViolationCertificate>;

using VertexFamily = BasicDisjointFamily<VertexTag>;

namespace detail {

template <class F>
bool family_rec(const std::vector<int>& elems, std::size_t idx, std::vector<VertexSet>& blocks,
                F& visit) {
  if (idx == elems.size()) return visit(static_cast<const std::vector<VertexSet>&>(blocks));
  int v = elems[idx];
  if (!family_rec(elems, idx + 1, blocks, visit)) return false;  // v outside the family
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    blocks[j] = blocks[j].with(v);
    if (!family_rec(elems, idx + 1, blocks, visit)) return false;
    blocks[j] = blocks[j].without(v);
  }
  blocks.push_back(VertexSet::single(v));
  bool go_on = family_rec(elems, idx + 1, blocks, visit);
  blocks.pop_back();
  return go_on;
}

}  // namespace detail

// Visits every family of disjoint nonempty subsets of `ground` exactly once,
// including the empty family, in lexicographic labeling order (label 0 =
// outside, blocks numbered by first occurrence). Visitor returns false to
// stop; the function returns false iff stopped.
template <class F>
bool for_each_disjoint_family(VertexSet ground, F&& visit) {
  std::vector<int> elems;
  for (int v : ground) elems.push_back(v);
  std::vector<VertexSet> blocks;
  return detail::family_rec(elems, 0, blocks, visit);
}

struct Sides {
  long long lhs = 0;
  long long rhs = 0;
};

// ---------------------------------------------------------------------------
// Side evaluation for each condition. The checkers below and the certificate
// re-verification paths share these.
// ---------------------------------------------------------------------------

// Completion cut: pool in-degree of X vs. number of forests missing X.
// Fails when lhs < rhs.
inline Sides eval_completion_cut(const ForestState& st, ArcSet pool, VertexSet x) {
  return {in_degree(st.inst.graph, pool, x),
          missing_forests(st, st.all_indices(), x).count()};
}

// Lower-bound feasibility for one (family, part-union) choice: residual
// in-degrees plus leftover root-arc capacity vs. missing-forest counts plus
// remaining lower-bound demand. Fails when lhs < rhs.
inline Sides eval_cond4(const ForestState& st, const std::vector<VertexSet>& family,
                        PartSet iparts) {
  if (!st.lower_active()) throw InputError("lower bounds are not active");
  ArcSet residual = st.residual_arcs();
  IndexSet within = st.indices_of(iparts);
  IndexSet outside = st.all_indices() - within;
  VertexSet rest = st.inst.ground();
  Sides s;
  for (VertexSet x : family) {
    s.lhs += in_degree(st.inst.graph, residual, x);
    s.rhs += missing_forests(st, within, x).count();
    rest = rest - x;
  }
  for (int a = 0; a < st.part_count(); ++a)
    if (!iparts.contains(a)) s.rhs += (*st.lower)[a] - st.part_root_degree(a);
  s.rhs -= root_arc_capacity_sum(st, outside, rest);
  return s;
}

// The slack of one lower-bound inequality; nonnegative iff it holds.
inline long long cond4_slack(const ForestState& st, const std::vector<VertexSet>& family,
                             PartSet iparts) {
  Sides s = eval_cond4(st, family, iparts);
  return s.lhs - s.rhs;
}

// Upper-bound feasibility for one (family, part-union) choice: total
// root-arc demand of the family vs. the chosen parts' remaining budget.
// Fails when lhs > rhs.
inline Sides eval_cond22(const ForestState& st, const std::vector<VertexSet>& family,
                         PartSet iparts) {
  if (!st.upper_active()) throw InputError("upper bounds are not active");
  ArcSet nonroot = st.residual_nonroot_arcs();
  IndexSet within = st.indices_of(iparts);
  Sides s;
  for (VertexSet x : family)
    s.lhs += missing_forests(st, within, x).count() - in_degree(st.inst.graph, nonroot, x);
  for (int a : iparts) s.rhs += (*st.upper)[a] - st.part_root_degree(a);
  return s;
}

// Restated completion cut: non-root residual in-degree plus root-arc capacity
// vs. missing-forest count. Fails when lhs < rhs.
inline Sides eval_cond54r(const ForestState& st, VertexSet x) {
  return {in_degree(st.inst.graph, st.residual_nonroot_arcs(), x) +
              root_arc_capacity_sum(st, st.all_indices(), x),
          missing_forests(st, st.all_indices(), x).count()};
}

// Prescribed-root packing context: branchings B_i with U_i inside R(B_i) and
// per-part caps on |R(B_i)| sums, before any reduction.
struct PrescribedInstance {
  const Digraph& d;
  std::vector<IndexSet> parts;
  std::vector<int> c_prime;
  std::vector<VertexSet> u;  // one per branching

  int k() const { return static_cast<int>(u.size()); }
};

// Fails when lhs > rhs.
inline Sides eval_cond2(const PrescribedInstance& in, const std::vector<VertexSet>& family,
                        PartSet iparts) {
  Sides s;
  for (VertexSet x : family) {
    int miss = 0;
    for (int a : iparts)
      for (int i : in.parts[a])
        if (!x.intersects(in.u[i])) ++miss;
    s.lhs += miss - in_degree(in.d, in.d.arcs(), x);
  }
  for (int a : iparts) {
    int placed = 0;
    for (int i : in.parts[a]) placed += in.u[i].count();
    s.rhs += in.c_prime[a] - placed;
  }
  return s;
}

// Root-set packing cut: in-degree of X vs. prescribed root sets missing X.
// Fails when lhs < rhs.
inline Sides eval_edmonds(const Digraph& d, const std::vector<VertexSet>& rootsets, VertexSet x) {
  int miss = 0;
  for (VertexSet r : rootsets)
    if (!x.intersects(r)) ++miss;
  return {in_degree(d, d.arcs(), x), miss};
}

// Spanning-arborescence packing cut. Fails when lhs < rhs.
inline Sides eval_spanning_pack(const Digraph& d, int k, const std::vector<VertexSet>& family) {
  Sides s;
  for (VertexSet x : family) s.lhs += in_degree(d, d.arcs(), x);
  s.rhs = static_cast<long long>(k) * (static_cast<long long>(family.size()) - 1);
  return s;
}

// ---------------------------------------------------------------------------
// Exact checkers. Single-subset checkers report the violating set of maximal
// cardinality (ties broken toward the largest bitmask); family checkers
// report the first violation in enumeration order unless `report_last`.
// ---------------------------------------------------------------------------

inline CheckResult check_completion_cut(const ForestState& st, ArcSet pool,
                                        const OracleLimits& lim = {}) {
  if (st.inst.ground().count() > lim.max_single) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> worst;
  for_each_nonempty_subset(st.inst.ground(), [&](VertexSet x) {
    Sides s = eval_completion_cut(st, pool, x);
    if (s.lhs < s.rhs) worst = ViolationCertificate{"cond11", {x}, {}, s.lhs, s.rhs};
    return true;
  });
  return worst;
}

inline CheckResult check_cond11(const ForestState& st, const OracleLimits& lim = {}) {
  return check_completion_cut(st, st.residual_arcs(), lim);
}

inline CheckResult check_cond54r(const ForestState& st, const OracleLimits& lim = {}) {
  if (st.inst.ground().count() > lim.max_single) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> worst;
  for_each_nonempty_subset(st.inst.ground(), [&](VertexSet x) {
    Sides s = eval_cond54r(st, x);
    if (s.lhs < s.rhs) worst = ViolationCertificate{"cond54r", {x}, {}, s.lhs, s.rhs};
    return true;
  });
  return worst;
}

inline CheckResult check_cond4(const ForestState& st, const OracleLimits& lim = {},
                               bool report_last = false) {
  if (!st.lower_active()) throw InputError("lower bounds are not active");
  if (st.inst.ground().count() > lim.max_family) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> found;
  for_each_disjoint_family(st.inst.ground(), [&](const std::vector<VertexSet>& family) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << st.part_count()); ++m) {
      PartSet ps = PartSet::of_bits(m);
      Sides s = eval_cond4(st, family, ps);
      if (s.lhs < s.rhs) {
        found = ViolationCertificate{"cond4", family, st.indices_of(ps), s.lhs, s.rhs};
        if (!report_last) return false;
      }
    }
    return true;
  });
  return found;
}

inline CheckResult check_cond22(const ForestState& st, const OracleLimits& lim = {},
                                bool report_last = false) {
  if (!st.upper_active()) throw InputError("upper bounds are not active");
  if (st.inst.ground().count() > lim.max_family) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> found;
  for_each_disjoint_family(st.inst.ground(), [&](const std::vector<VertexSet>& family) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << st.part_count()); ++m) {
      PartSet ps = PartSet::of_bits(m);
      Sides s = eval_cond22(st, family, ps);
      if (s.lhs > s.rhs) {
        found = ViolationCertificate{"cond22", family, st.indices_of(ps), s.lhs, s.rhs};
        if (!report_last) return false;
      }
    }
    return true;
  });
  return found;
}

inline CheckResult check_cond2(const PrescribedInstance& in, const OracleLimits& lim = {},
                               bool report_last = false) {
  for (std::size_t a = 0; a < in.parts.size(); ++a) {
    int placed = 0;
    for (int i : in.parts[a]) placed += in.u[i].count();
    if (placed > in.c_prime[a]) throw InputError("prescribed roots already exceed the cap");
  }
  if (in.d.vertex_count() > lim.max_family) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> found;
  IndexSet all_idx;
  for (IndexSet p : in.parts) all_idx = all_idx | p;
  for_each_disjoint_family(in.d.vertices(), [&](const std::vector<VertexSet>& family) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << in.parts.size()); ++m) {
      PartSet ps = PartSet::of_bits(m);
      Sides s = eval_cond2(in, family, ps);
      if (s.lhs > s.rhs) {
        IndexSet iu;
        for (int a : ps) iu = iu | in.parts[a];
        found = ViolationCertificate{"cond2", family, iu, s.lhs, s.rhs};
        if (!report_last) return false;
      }
    }
    return true;
  });
  return found;
}

inline CheckResult check_edmonds(const Digraph& d, const std::vector<VertexSet>& rootsets,
                                 const OracleLimits& lim = {}) {
  for (VertexSet r : rootsets) {
    d.check_vertex_set(r);
    if (r.empty()) throw InputError("empty prescribed root set");
  }
  if (d.vertex_count() > lim.max_single) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> worst;
  for_each_nonempty_subset(d.vertices(), [&](VertexSet x) {
    Sides s = eval_edmonds(d, rootsets, x);
    if (s.lhs < s.rhs) worst = ViolationCertificate{"edmonds", {x}, {}, s.lhs, s.rhs};
    return true;
  });
  return worst;
}

inline CheckResult check_spanning_pack(const Digraph& d, int k, const OracleLimits& lim = {}) {
  if (k < 0) throw InputError("negative k");
  if (d.vertex_count() > lim.max_family) throw CapacityError("ground set too large");
  std::optional<ViolationCertificate> found;
  for_each_disjoint_family(d.vertices(), [&](const std::vector<VertexSet>& family) {
    Sides s = eval_spanning_pack(d, k, family);
    if (s.lhs < s.rhs) {
      found = ViolationCertificate{"spanning", family, {}, s.lhs, s.rhs};
      return false;
    }
    return true;
  });
  return found;
}

// Feasibility conditions for packing spanning arborescences with per-vertex
// root multiplicity bounds f <= g. Checker only; no constructive solver.
inline CheckResult check_cai_frank(const Digraph& d, int k, const std::vector<int>& f,
                                   const std::vector<int>& g, const OracleLimits& lim = {}) {
  int n = d.vertex_count();
  if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n)
    throw InputError("bound table size mismatch");
  for (int v = 0; v < n; ++v)
    if (f[v] < 0 || f[v] > g[v]) throw InputError("need 0 <= f <= g pointwise");
  if (n > lim.max_family) throw CapacityError("ground set too large");

  long long ftotal = 0;
  for (int v = 0; v < n; ++v) ftotal += f[v];
  if (ftotal > k) return ViolationCertificate{"cai_frank_i", {}, {}, ftotal, k};

  std::optional<ViolationCertificate> found;
  for_each_disjoint_family(d.vertices(), [&](const std::vector<VertexSet>& family) {
    Sides s;
    VertexSet rest = d.vertices();
    for (VertexSet x : family) {
      s.lhs += in_degree(d, d.arcs(), x);
      rest = rest - x;
    }
    s.rhs = static_cast<long long>(k) * (static_cast<long long>(family.size()) - 1);
    for (int v : rest) s.rhs += f[v];
    if (s.lhs < s.rhs) {
      found = ViolationCertificate{"cai_frank_ii", family, {}, s.lhs, s.rhs};
      return false;
    }
    return true;
  });
  if (found) return found;

  std::optional<ViolationCertificate> worst;
  for_each_nonempty_subset(d.vertices(), [&](VertexSet x) {
    long long gx = 0;
    for (int v : x) gx += g[v];
    long long need = k - in_degree(d, d.arcs(), x);
    if (gx < need) worst = ViolationCertificate{"cai_frank_iii", {x}, {}, gx, need};
    return true;
  });
  return worst;
}

// ---------------------------------------------------------------------------
// Root-arc demand machinery for the upper-bound proofs.
// ---------------------------------------------------------------------------

// Demand of a family on new root arcs for forests of `within`: for each
// member, how many of those forests miss it beyond what non-root residual
// arcs can deliver. Zero on the empty family.
inline long long root_demand(const ForestState& st, IndexSet within,
                             const std::vector<VertexSet>& family) {
  ArcSet nonroot = st.residual_nonroot_arcs();
  long long h = 0;
  for (VertexSet x : family)
    h += missing_forests(st, within, x).count() - in_degree(st.inst.graph, nonroot, x);
  return h;
}

inline long long root_demand(const ForestState& st, IndexSet within, const VertexFamily& fam) {
  return root_demand(st, within, fam.members);
}

// Remaining root-arc budget of the chosen parts.
inline long long part_upper_slack(const ForestState& st, PartSet ps) {
  long long s = 0;
  for (int a : ps) s += (*st.upper)[a] - st.part_root_degree(a);
  return s;
}

// Families whose demand exactly meets the parts' remaining budget, with every
// member individually demanding; the empty family qualifies iff the budget is
// zero.
inline std::vector<VertexFamily> tight_demand_families(const ForestState& st, PartSet ps,
                                                       const OracleLimits& lim = {}) {
  if (!st.upper_active()) throw InputError("upper bounds are not active");
  if (st.inst.ground().count() > lim.max_family) throw CapacityError("ground set too large");
  ArcSet nonroot = st.residual_nonroot_arcs();
  IndexSet within = st.indices_of(ps);
  long long target = part_upper_slack(st, ps);
  std::vector<VertexFamily> out;
  for_each_disjoint_family(st.inst.ground(), [&](const std::vector<VertexSet>& family) {
    long long total = 0;
    for (VertexSet x : family) {
      long long demand =
          missing_forests(st, within, x).count() - in_degree(st.inst.graph, nonroot, x);
      if (demand <= 0) return true;
      total += demand;
    }
    if (total == target) out.emplace_back(st.inst.ground(), family);
    return true;
  });
  return out;
}

// Families whose demand is exactly met by unused parallel root arcs, member
// by member demanding.
inline std::vector<VertexFamily> supply_tight_families(const ForestState& st,
                                                       const OracleLimits& lim = {}) {
  if (!st.upper_active()) throw InputError("upper bounds are not active");
  if (st.inst.ground().count() > lim.max_family) throw CapacityError("ground set too large");
  ArcSet residual = st.residual_arcs();
  ArcSet nonroot = st.residual_nonroot_arcs();
  IndexSet all = st.all_indices();
  VertexSet rootset = VertexSet::single(st.inst.root);
  std::vector<VertexFamily> out;
  for_each_disjoint_family(st.inst.ground(), [&](const std::vector<VertexSet>& family) {
    long long total = 0, supply = 0;
    for (VertexSet x : family) {
      long long demand = missing_forests(st, all, x).count() - in_degree(st.inst.graph, nonroot, x);
      if (demand <= 0) return true;
      total += demand;
      supply += count_arcs(st.inst.graph, residual, rootset, x);
    }
    if (total == supply) out.emplace_back(st.inst.ground(), family);
    return true;
  });
  return out;
}

// The unique minimum (under member-wise containment) among the tight-demand
// families of the chosen parts: minimal support, then maximum member count.
inline std::optional<VertexFamily> minimum_tight_family(const ForestState& st, PartSet ps,
                                                        const OracleLimits& lim = {}) {
  std::vector<VertexFamily> fams = tight_demand_families(st, ps, lim);
  if (fams.empty()) return std::nullopt;
  std::vector<VertexSet> supports;
  supports.reserve(fams.size());
  for (const VertexFamily& f : fams) supports.push_back(f.support());
  VertexSet min_support = supports[0];
  for (VertexSet s : supports)
    if (s.count() < min_support.count() || (s.count() == min_support.count() && s < min_support))
      min_support = s;
  for (VertexSet s : supports)
    if (!min_support.subset_of(s)) throw ContractError("tight-family supports are not nested");
  std::optional<VertexFamily> best;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    if (supports[i] != min_support) continue;
    if (!best || fams[i].size() > best->size()) best = fams[i];
  }
  for (const VertexFamily& f : fams)
    if (!family_leq(*best, f)) throw ContractError("selected family is not the minimum");
  return best;
}

// The unique maximum among the tight-demand families over all parts, obtained
// as the join of all of them (which must itself be tight).
inline std::optional<VertexFamily> maximum_tight_family(const ForestState& st,
                                                        const OracleLimits& lim = {}) {
  std::vector<VertexFamily> fams = tight_demand_families(st, st.all_parts(), lim);
  if (fams.empty()) return std::nullopt;
  VertexFamily top = fams[0];
  for (std::size_t i = 1; i < fams.size(); ++i) top = family_join(top, fams[i]);
  bool member = false;
  for (const VertexFamily& f : fams)
    if (f == top) member = true;
  if (!member) throw ContractError("join of tight families is not tight");
  return top;
}

// ---------------------------------------------------------------------------
// Balance value for the branching-decomposition construction.
// ---------------------------------------------------------------------------

// Slack of a (t+2)-class partition of V in the auxiliary instance where every
// vertex has in-degree exactly k. Nonnegative for every I whenever the
// decomposition preconditions hold; linear in |I|.
inline long long decomposition_slack(const RootedInstance& dprime, int k, int c,
                                     const std::vector<VertexSet>& classes, IndexSet within) {
  if (classes.size() < 2) throw InputError("need at least the two remainder classes");
  VertexSet seen;
  for (VertexSet x : classes) {
    dprime.graph.check_vertex_set(x);
    if (x.contains(dprime.root)) throw InputError("classes may not contain the root");
    if (x.intersects(seen)) throw InputError("classes overlap");
    seen = seen | x;
  }
  if (seen != dprime.ground()) throw InputError("classes do not partition the ground set");
  int t = static_cast<int>(classes.size()) - 2;
  int isize = within.count();
  int osize = k - isize;
  long long g = 0;
  for (int j = 0; j < t; ++j) g += in_degree(dprime.graph, dprime.graph.arcs(), classes[j]);
  long long root_into_t1 = count_arcs(dprime.graph, dprime.graph.arcs(),
                                      VertexSet::single(dprime.root), classes[t]);
  g -= static_cast<long long>(t) * isize + static_cast<long long>(c) * osize - root_into_t1 -
       static_cast<long long>(osize) * classes[t + 1].count();
  return g;
}

}  // namespace arbor
