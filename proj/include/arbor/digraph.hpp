#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arbor/errors.hpp"
#include "arbor/small_set.hpp"

namespace arbor {

struct Arc {
  int tail = -1;
  int head = -1;
};

// Multigraph on dense vertex ids 0..n-1 with stable arc ids. Parallel arcs are
// distinct ids and never collapsed; loops are rejected.
class Digraph {
 public:
  explicit Digraph(int vertex_count) : n_(vertex_count) {
    if (vertex_count < 0) throw InputError("negative vertex count");
    if (vertex_count > 64) throw CapacityError("more than 64 vertices");
  }

  int add_arc(int tail, int head) {
    if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
      throw InputError("arc endpoint out of range");
    if (tail == head) throw InputError("loops are not allowed");
    if (static_cast<int>(arcs_.size()) >= 64) throw CapacityError("more than 64 arcs");
    arcs_.push_back({tail, head});
    return static_cast<int>(arcs_.size()) - 1;
  }

  int vertex_count() const { return n_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  const Arc& arc(int id) const {
    if (id < 0 || id >= arc_count()) throw InputError("unknown arc id");
    return arcs_[id];
  }
  VertexSet vertices() const { return VertexSet::full(n_); }
  ArcSet arcs() const { return ArcSet::full(arc_count()); }

  void check_vertex_set(VertexSet s) const {
    if (!s.subset_of(vertices())) throw InputError("vertex set exceeds graph");
  }
  void check_arc_set(ArcSet s) const {
    if (!s.subset_of(arcs())) throw InputError("arc set exceeds graph");
  }

 private:
  int n_;
  std::vector<Arc> arcs_;
};

// Number of arcs of `a0` with tail in `tails` and head in `heads`.
inline int count_arcs(const Digraph& d, ArcSet a0, VertexSet tails, VertexSet heads) {
  d.check_arc_set(a0);
  d.check_vertex_set(tails);
  d.check_vertex_set(heads);
  int c = 0;
  for (int id : a0) {
    const Arc& a = d.arc(id);
    if (tails.contains(a.tail) && heads.contains(a.head)) ++c;
  }
  return c;
}

// In-degree of a vertex set within `a0`: arcs entering from outside.
inline int in_degree(const Digraph& d, ArcSet a0, VertexSet target) {
  return count_arcs(d, a0, d.vertices() - target, target);
}

inline int out_degree(const Digraph& d, ArcSet a0, int v) {
  return count_arcs(d, a0, VertexSet::single(v), d.vertices().without(v));
}

// Arcs of `a0` with tail v.
inline ArcSet out_arcs(const Digraph& d, ArcSet a0, int v) {
  ArcSet r;
  for (int id : a0)
    if (d.arc(id).tail == v) r = r.with(id);
  return r;
}

// All endpoints touched by an arc set.
inline VertexSet covered_vertices(const Digraph& d, ArcSet arcs) {
  VertexSet r;
  for (int id : arcs) {
    const Arc& a = d.arc(id);
    r = r.with(a.tail).with(a.head);
  }
  return r;
}

// True iff `arcs` forms an arborescence rooted at `root` (not necessarily
// spanning): every covered non-root vertex has in-degree exactly one and is
// reachable from the root. Malformed candidates yield false, not an error.
inline bool is_arborescence(const Digraph& d, int root, ArcSet arcs) {
  if (root < 0 || root >= d.vertex_count()) return false;
  d.check_arc_set(arcs);
  int indeg[64] = {};
  for (int id : arcs) ++indeg[d.arc(id).head];
  if (indeg[root] != 0) return false;
  VertexSet covered = covered_vertices(d, arcs);
  for (int v : covered)
    if (v != root && indeg[v] != 1) return false;
  // walk outward from the root; in-degrees are 1, so reaching every covered
  // vertex rules out cycles and detached pieces
  VertexSet reached = VertexSet::single(root);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int id : arcs) {
      const Arc& a = d.arc(id);
      if (reached.contains(a.tail) && !reached.contains(a.head)) {
        reached = reached.with(a.head);
        grew = true;
      }
    }
  }
  return (covered - reached).empty();
}

// True iff every vertex has in-degree at most one and there is no directed
// cycle, i.e. each component of the spanning subdigraph is an arborescence.
inline bool is_branching(const Digraph& d, ArcSet arcs) {
  d.check_arc_set(arcs);
  int parent[64];
  for (int v = 0; v < d.vertex_count(); ++v) parent[v] = -1;
  for (int id : arcs) {
    const Arc& a = d.arc(id);
    if (parent[a.head] != -1) return false;
    parent[a.head] = a.tail;
  }
  for (int v = 0; v < d.vertex_count(); ++v) {
    int u = v;
    int steps = 0;
    while (u != -1) {
      u = parent[u];
      if (++steps > d.vertex_count()) return false;  // cycle
    }
  }
  return true;
}

// Root set of a branching: its in-degree-0 vertices over all of V.
inline VertexSet root_set(const Digraph& d, ArcSet arcs) {
  if (!is_branching(d, arcs)) throw ContractError("root_set of a non-branching");
  VertexSet heads;
  for (int id : arcs) heads = heads.with(d.arc(id).head);
  return d.vertices() - heads;
}

// Digraph on V+x with a distinguished root x; V is everything but the root.
struct RootedInstance {
  Digraph graph;
  int root = 0;

  RootedInstance(Digraph g, int r) : graph(std::move(g)), root(r) {
    if (r < 0 || r >= graph.vertex_count()) throw InputError("root is not a vertex");
  }
  VertexSet ground() const { return graph.vertices().without(root); }
};

// An arborescence inside a fixed digraph, stored as root plus arc set.
struct Arborescence {
  int root = -1;
  ArcSet arcs;

  VertexSet vertices(const Digraph& d) const {
    return covered_vertices(d, arcs).with(root);
  }
};

// The mutable object of augmentation: k arc-disjoint x-arborescences together
// with a partition of [k] and optional per-part lower/upper root-arc bounds.
struct ForestState {
  RootedInstance inst;
  std::vector<Arborescence> forests;
  std::vector<IndexSet> parts;              // partition of [k]
  std::optional<std::vector<int>> lower;    // per-part minimum root arcs
  std::optional<std::vector<int>> upper;    // per-part maximum root arcs

  int k() const { return static_cast<int>(forests.size()); }
  int part_count() const { return static_cast<int>(parts.size()); }
  bool lower_active() const { return lower.has_value(); }
  bool upper_active() const { return upper.has_value(); }

  ArcSet used_arcs() const {
    ArcSet u;
    for (const Arborescence& f : forests) u = u | f.arcs;
    return u;
  }
  ArcSet residual_arcs() const { return inst.graph.arcs() - used_arcs(); }
  // Arcs outside every forest whose tail is not the root.
  ArcSet residual_nonroot_arcs() const {
    ArcSet r = residual_arcs();
    ArcSet out;
    for (int id : r)
      if (inst.graph.arc(id).tail != inst.root) out = out.with(id);
    return out;
  }

  // Vertices of V covered by forest i (the root does not count).
  VertexSet covered(int i) const { return forests[i].vertices(inst.graph) - VertexSet::single(inst.root); }

  int root_degree(int i) const { return out_degree(inst.graph, forests[i].arcs, inst.root); }
  int part_root_degree(int a) const {
    int s = 0;
    for (int i : parts[a]) s += root_degree(i);
    return s;
  }

  IndexSet all_indices() const { return IndexSet::full(k()); }
  PartSet all_parts() const { return PartSet::full(part_count()); }
  IndexSet indices_of(PartSet ps) const {
    IndexSet r;
    for (int a : ps) r = r | parts[a];
    return r;
  }
};

// Builds a ForestState and verifies every invariant the solvers rely on.
inline ForestState make_forest_state(RootedInstance inst, std::vector<Arborescence> forests,
                                     std::vector<IndexSet> parts,
                                     std::optional<std::vector<int>> lower = std::nullopt,
                                     std::optional<std::vector<int>> upper = std::nullopt) {
  const Digraph& d = inst.graph;
  int k = static_cast<int>(forests.size());
  ArcSet seen;
  for (const Arborescence& f : forests) {
    if (f.root != inst.root) throw InputError("forest not rooted at the instance root");
    if (!is_arborescence(d, f.root, f.arcs)) throw InputError("forest is not an arborescence");
    if (f.arcs.intersects(seen)) throw InputError("forests share an arc");
    seen = seen | f.arcs;
  }
  if (parts.empty() && k > 0) parts.push_back(IndexSet::full(k));
  IndexSet all;
  for (IndexSet p : parts) {
    if (p.empty()) throw InputError("empty partition part");
    if (p.intersects(all)) throw InputError("partition parts overlap");
    all = all | p;
  }
  if (all != IndexSet::full(k)) throw InputError("partition does not cover all forests");
  int l = static_cast<int>(parts.size());
  if (lower && static_cast<int>(lower->size()) != l) throw InputError("lower bound count mismatch");
  if (upper && static_cast<int>(upper->size()) != l) throw InputError("upper bound count mismatch");
  ForestState st{std::move(inst), std::move(forests), std::move(parts), std::move(lower), std::move(upper)};
  for (int a = 0; a < l; ++a) {
    if (st.lower && (*st.lower)[a] < 0) throw InputError("negative lower bound");
    if (st.upper && (*st.upper)[a] < 0) throw InputError("negative upper bound");
    if (st.lower && st.upper && (*st.lower)[a] > (*st.upper)[a])
      throw InputError("lower bound exceeds upper bound");
    if (st.upper && st.part_root_degree(a) > (*st.upper)[a])
      throw InputError("initial root arcs already exceed the upper bound");
  }
  return st;
}

// Forests of I whose vertex set misses X entirely.
inline IndexSet missing_forests(const ForestState& st, IndexSet within, VertexSet x) {
  st.inst.graph.check_vertex_set(x);
  if (x.contains(st.inst.root)) throw InputError("set may not contain the root");
  IndexSet r;
  for (int i : within)
    if (!x.intersects(st.covered(i))) r = r.with(i);
  return r;
}

// Per-vertex capacity for new root arcs usable by forests of I: the smaller of
// how many of them miss u and how many parallel root arcs into u are unused.
inline int root_arc_capacity(const ForestState& st, IndexSet within, int u) {
  if (u == st.inst.root) throw InputError("capacity of the root is undefined");
  int missing = 0;
  for (int i : within)
    if (!st.covered(i).contains(u)) ++missing;
  int residual = count_arcs(st.inst.graph, st.residual_arcs(), VertexSet::single(st.inst.root),
                            VertexSet::single(u));
  return missing < residual ? missing : residual;
}

inline int root_arc_capacity_sum(const ForestState& st, IndexSet within, VertexSet xs) {
  int s = 0;
  for (int u : xs) s += root_arc_capacity(st, within, u);
  return s;
}

}  // namespace arbor
