#pragma once

#include <optional>
#include <vector>

#include "arbor/augment.hpp"
#include "arbor/digraph.hpp"
#include "arbor/oracles.hpp"

namespace arbor {

// Exact fractional arboricity as an integer ratio with its maximizing set.
struct ArboricityReport {
  long long num = 0;
  long long den = 1;
  VertexSet witness;
};

// Maximum of |E(H)| / (|V(H)|-1) over vertex sets with at least two vertices,
// counting arcs with both ends inside H (multiplicity kept, direction
// ignored). A single-vertex digraph reports zero. Witness is the smallest
// maximizing bitmask.
inline ArboricityReport fractional_arboricity(const Digraph& d, const OracleLimits& lim = {}) {
  int n = d.vertex_count();
  if (n < 1) throw InputError("empty digraph");
  if (n > lim.max_single) throw CapacityError("ground set too large");
  if (n == 1) return ArboricityReport{0, 1, d.vertices()};
  ArboricityReport best{-1, 1, {}};
  for_each_nonempty_subset(d.vertices(), [&](VertexSet h) {
    if (h.count() < 2) return true;
    long long inside = 0;
    for (int e = 0; e < d.arc_count(); ++e)
      if (h.contains(d.arc(e).tail) && h.contains(d.arc(e).head)) ++inside;
    long long den = h.count() - 1;
    if (inside * best.den > best.num * den) best = ArboricityReport{inside, den, h};
    return true;
  });
  return best;
}

struct DecomposeResult {
  std::optional<std::vector<ArcSet>> branchings;
  std::optional<ViolationCertificate> certificate;

  bool ok() const { return branchings.has_value(); }
};

// Decomposes the whole arc set into k branchings, each with at least c roots.
// The three preconditions (max in-degree, fractional arboricity, global arc
// count) each produce a named certificate; when they hold, the super-root
// instance with every in-degree raised to k and per-branching lower bound c
// is completed and the spanning arborescences partition everything.
inline DecomposeResult decompose_cplus(const Digraph& d, int k, int c,
                                       const OracleLimits& lim = {}) {
  int n = d.vertex_count();
  int m = d.arc_count();
  if (n < 1) throw InputError("empty digraph");
  if (k < 1) throw InputError("need k >= 1");
  if (c < 0 || c > n) throw InputError("root minimum out of range");

  DecomposeResult out;
  int worst = 0;
  for (int v = 1; v < n; ++v)
    if (in_degree(d, d.arcs(), VertexSet::single(v)) >
        in_degree(d, d.arcs(), VertexSet::single(worst)))
      worst = v;
  int worst_deg = in_degree(d, d.arcs(), VertexSet::single(worst));
  if (worst_deg > k) {
    out.certificate =
        ViolationCertificate{"max_indegree", {VertexSet::single(worst)}, {}, worst_deg, k};
    return out;
  }
  ArboricityReport arb = fractional_arboricity(d, lim);
  if (arb.num > static_cast<long long>(k) * arb.den) {
    out.certificate = ViolationCertificate{
        "arboricity", {arb.witness}, {}, arb.num, static_cast<long long>(k) * arb.den};
    return out;
  }
  if (static_cast<long long>(m) > static_cast<long long>(k) * (n - c)) {
    out.certificate = ViolationCertificate{
        "arc_count", {d.vertices()}, {}, m, static_cast<long long>(k) * (n - c)};
    return out;
  }

  Digraph dp(n + 1);
  for (int e = 0; e < m; ++e) dp.add_arc(d.arc(e).tail, d.arc(e).head);
  for (int v = 0; v < n; ++v) {
    int need = k - in_degree(d, d.arcs(), VertexSet::single(v));
    for (int j = 0; j < need; ++j) dp.add_arc(n, v);
  }
  std::vector<Arborescence> forests(static_cast<std::size_t>(k), Arborescence{n, {}});
  std::vector<IndexSet> parts;
  for (int i = 0; i < k; ++i) parts.push_back(IndexSet::single(i));
  ForestState st = make_forest_state(RootedInstance(std::move(dp), n), std::move(forests), parts,
                                     std::vector<int>(static_cast<std::size_t>(k), c));
  AugmentResult res = augment_lower(st, lim);
  if (!res.ok()) throw ContractError("preconditions hold but the lower-bound completion failed");

  std::vector<ArcSet> classes;
  ArcSet original = ArcSet::full(m);
  ArcSet used;
  for (const Arborescence& f : *res.forests) {
    ArcSet b = f.arcs & original;
    if (b.intersects(used)) throw ContractError("classes are not arc-disjoint");
    used = used | b;
    classes.push_back(b);
  }
  if (used != original) throw ContractError("classes do not partition the arc set");
  out.branchings = std::move(classes);
  return out;
}

inline DecomposeResult decompose_k(const Digraph& d, int k, const OracleLimits& lim = {}) {
  return decompose_cplus(d, k, 0, lim);
}

// Evens out root-set sizes of a branching decomposition to within one of each
// other by repeatedly re-splitting the most extreme pair. Since every
// branching satisfies |R(B)| + |A(B)| = |V|, evening out the root counts
// evens out the arc counts at the same time.
inline std::vector<ArcSet> balance_decomposition(const Digraph& d, std::vector<ArcSet> branchings,
                                                 const OracleLimits& lim = {}) {
  int k = static_cast<int>(branchings.size());
  ArcSet used;
  for (ArcSet b : branchings) {
    if (!is_branching(d, b)) throw InputError("input class is not a branching");
    if (b.intersects(used)) throw InputError("input classes share an arc");
    used = used | b;
  }
  if (used != d.arcs()) throw InputError("input classes do not cover the arc set");
  if (k <= 1) return branchings;

  auto sizes = [&]() {
    std::vector<int> r;
    for (ArcSet b : branchings) r.push_back(root_set(d, b).count());
    return r;
  };

  int guard = k * k * (d.vertex_count() + 1);
  while (true) {
    std::vector<int> r = sizes();
    int imax = 0, imin = 0;
    for (int i = 1; i < k; ++i) {
      if (r[i] > r[imax]) imax = i;
      if (r[i] < r[imin]) imin = i;
    }
    if (r[imax] - r[imin] <= 1) break;
    if (--guard < 0) throw ContractError("balancing did not converge");

    // re-split the union of the extreme pair into two halves
    Digraph sub(d.vertex_count());
    std::vector<int> back;
    for (int e : branchings[imax] | branchings[imin]) {
      sub.add_arc(d.arc(e).tail, d.arc(e).head);
      back.push_back(e);
    }
    int target = (r[imax] + r[imin]) / 2;
    DecomposeResult split = decompose_cplus(sub, 2, target, lim);
    if (!split.ok()) throw ContractError("pair re-split is always feasible");
    ArcSet b0, b1;
    for (int e : (*split.branchings)[0]) b0 = b0.with(back[e]);
    for (int e : (*split.branchings)[1]) b1 = b1.with(back[e]);
    if ((b0 | b1) != (branchings[imax] | branchings[imin]))
      throw ContractError("re-split changed the pair's arc set");
    int r0 = root_set(d, b0).count();
    int r1 = root_set(d, b1).count();
    if (r0 - r1 > 1 || r1 - r0 > 1) throw ContractError("re-split halves differ by more than one");
    branchings[imax] = b0;
    branchings[imin] = b1;
  }
  return branchings;
}

}  // namespace arbor
