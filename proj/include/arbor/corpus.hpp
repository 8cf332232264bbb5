#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "arbor/augment.hpp"
#include "arbor/bipartite.hpp"
#include "arbor/brute_force.hpp"
#include "arbor/decompose.hpp"
#include "arbor/oracles.hpp"
#include "arbor/pack.hpp"
#include "arbor/validate.hpp"

// Seeded random instances and the solver/checker/brute-force agreement
// harness shared by the corpus command and the acceptance suite.

namespace arbor {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
  bool chance(double p) { return static_cast<double>(eng() % 1000000) < p * 1000000.0; }
};

struct GenProfile {
  double density = 0.5;    // how many arcs relative to the cap
  double parallel = 0.3;   // probability an arc duplicates an existing pair
  double tightness = 0.7;  // how close bounds sit to the current root degrees
};

inline GenProfile profile_by_name(const std::string& name) {
  if (name == "sparse") return {0.3, 0.15, 0.3};
  if (name == "tight") return {0.55, 0.35, 1.0};
  if (name == "dense") return {0.85, 0.5, 0.6};
  throw InputError("unknown profile: " + name);
}

struct GenCaps {
  int max_v = 4;
  int max_k = 3;
  int max_residual = 10;
};

// A rooted digraph with grown arc-disjoint forests and a random partition;
// bounds are attached by the per-theorem wrappers below.
inline ForestState gen_base_state(Rng& rng, const GenProfile& prof, const GenCaps& caps) {
  int n = 1 + rng.below(caps.max_v);
  int root = n;
  Digraph d(n + 1);
  int arcs = 1 + rng.below(static_cast<int>(caps.max_residual * prof.density) + 2);
  std::vector<std::pair<int, int>> pairs;
  for (int e = 0; e < arcs && d.arc_count() < caps.max_residual + 6; ++e) {
    int tail, head;
    if (!pairs.empty() && rng.chance(prof.parallel)) {
      auto [t, h] = pairs[static_cast<std::size_t>(rng.below(static_cast<int>(pairs.size())))];
      tail = t;
      head = h;
    } else {
      tail = rng.chance(0.45) ? root : rng.below(n);
      head = rng.below(n);
      if (head == tail) head = root == tail ? rng.below(n) : root;
      if (head == tail) continue;
    }
    d.add_arc(tail, head);
    pairs.emplace_back(tail, head);
  }

  int k = 1 + rng.below(caps.max_k);
  std::vector<Arborescence> forests(static_cast<std::size_t>(k), Arborescence{root, {}});
  ArcSet used;
  for (int i = 0; i < k; ++i) {
    int grow = rng.below(n + 1);
    for (int step = 0; step < grow; ++step) {
      VertexSet reach = covered_vertices(d, forests[static_cast<std::size_t>(i)].arcs).with(root);
      std::vector<int> options;
      for (int e = 0; e < d.arc_count(); ++e) {
        if (used.contains(e)) continue;
        const Arc& a = d.arc(e);
        if (reach.contains(a.tail) && !reach.contains(a.head) && a.head != root) options.push_back(e);
      }
      if (options.empty()) break;
      int e = options[static_cast<std::size_t>(rng.below(static_cast<int>(options.size())))];
      forests[static_cast<std::size_t>(i)].arcs = forests[static_cast<std::size_t>(i)].arcs.with(e);
      used = used.with(e);
    }
  }

  std::vector<int> order;
  for (int i = 0; i < k; ++i) order.push_back(i);
  for (int i = k - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(rng.below(i + 1))]);
  int l = 1 + rng.below(k);
  // the first l forests seed the parts so none stays empty
  std::vector<IndexSet> parts(static_cast<std::size_t>(l));
  for (int i = 0; i < k; ++i) {
    int slot = i < l ? i : rng.below(l);
    parts[static_cast<std::size_t>(slot)] =
        parts[static_cast<std::size_t>(slot)].with(order[static_cast<std::size_t>(i)]);
  }

  return make_forest_state(RootedInstance(std::move(d), root), std::move(forests), parts);
}

inline std::vector<int> gen_lower_bounds(Rng& rng, const GenProfile& prof, const ForestState& st) {
  std::vector<int> lower;
  for (int a = 0; a < st.part_count(); ++a) {
    int cur = st.part_root_degree(a);
    int extra = rng.chance(prof.tightness) ? rng.below(3) : 0;
    lower.push_back(cur + extra > 0 ? rng.below(cur + extra + 1) : 0);
  }
  return lower;
}

inline std::vector<int> gen_upper_bounds(Rng& rng, const GenProfile& prof, const ForestState& st,
                                         const std::vector<int>* floor = nullptr) {
  std::vector<int> upper;
  for (int a = 0; a < st.part_count(); ++a) {
    int base = st.part_root_degree(a);
    if (floor && (*floor)[static_cast<std::size_t>(a)] > base) base = (*floor)[static_cast<std::size_t>(a)];
    int slack = rng.chance(prof.tightness) ? rng.below(2) : rng.below(4);
    upper.push_back(base + slack);
  }
  return upper;
}

// ---------------------------------------------------------------------------
// Agreement runners. Each returns true when solver, condition checker and
// brute force agree; budget blowups are reported separately, never as
// disagreement.
// ---------------------------------------------------------------------------

struct EquivStats {
  long long runs = 0;
  long long mismatches = 0;
  long long budget_skips = 0;
  long long solutions = 0;
  long long valid_solutions = 0;
  long long certificates = 0;
  long long valid_certificates = 0;
};

enum class EquivOutcome { agree, mismatch, budget };

inline EquivOutcome record(EquivStats& st, bool solver_ok, bool checks_ok, BfStatus bf,
                           bool flip_checker = false) {
  ++st.runs;
  if (bf == BfStatus::budget_exceeded) {
    ++st.budget_skips;
    return EquivOutcome::budget;
  }
  if (flip_checker) checks_ok = !checks_ok;
  bool brute_ok = bf == BfStatus::feasible;
  if (solver_ok == checks_ok && checks_ok == brute_ok) return EquivOutcome::agree;
  ++st.mismatches;
  return EquivOutcome::mismatch;
}

inline EquivOutcome run_completion_equiv(const ForestState& st, EquivStats& stats,
                                         const OracleLimits& lim = {}, SearchBudget budget = {},
                                         bool corrupt_checker = false) {
  AugmentResult res = complete_to_spanning(st, st.residual_arcs(), lim);
  bool checks_ok = !check_cond11(st, lim).has_value();
  BfCompletion bf = bf_feasible_completion(st, budget);
  if (res.ok()) {
    ++stats.solutions;
    if (valid_completion(st, *res.forests)) ++stats.valid_solutions;
  } else {
    ++stats.certificates;
    if (reverify_on_state(st, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status, corrupt_checker);
}

inline EquivOutcome run_lower_equiv(const ForestState& base, const std::vector<int>& lower,
                                    EquivStats& stats, const OracleLimits& lim = {},
                                    SearchBudget budget = {}) {
  ForestState st = base;
  st.lower = lower;
  AugmentResult res = augment_lower(st, lim);
  bool checks_ok = !check_cond4(st, lim).has_value();
  BfCompletion bf = bf_feasible_completion(st, budget);
  if (res.ok()) {
    ++stats.solutions;
    if (valid_completion(st, *res.forests)) ++stats.valid_solutions;
  } else {
    ++stats.certificates;
    if (reverify_on_state(st, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status);
}

inline EquivOutcome run_upper_equiv(const ForestState& base, const std::vector<int>& upper,
                                    EquivStats& stats, const OracleLimits& lim = {},
                                    SearchBudget budget = {}) {
  ForestState st = base;
  st.upper = upper;
  AugmentResult res = augment_upper(st, lim);
  bool checks_ok = !check_cond11(st, lim) && !check_cond22(st, lim);
  BfCompletion bf = bf_feasible_completion(st, budget);
  if (res.ok()) {
    ++stats.solutions;
    if (valid_completion(st, *res.forests)) ++stats.valid_solutions;
  } else {
    ++stats.certificates;
    if (reverify_on_state(st, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status);
}

inline EquivOutcome run_both_equiv(const ForestState& base, const std::vector<int>& lower,
                                   const std::vector<int>& upper, EquivStats& stats,
                                   const OracleLimits& lim = {}, SearchBudget budget = {}) {
  ForestState st = base;
  st.lower = lower;
  st.upper = upper;
  AugmentResult res = augment_both(st, lim);
  bool checks_ok = !check_cond4(st, lim) && !check_cond22(st, lim);
  BfCompletion bf = bf_feasible_completion(st, budget);
  if (res.ok()) {
    ++stats.solutions;
    if (valid_completion(st, *res.forests)) ++stats.valid_solutions;
  } else {
    ++stats.certificates;
    if (reverify_on_state(st, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status);
}

// Plain digraph for the packing/decomposition theorems.
inline Digraph gen_plain_digraph(Rng& rng, const GenProfile& prof, int max_v, int max_arcs) {
  int n = 1 + rng.below(max_v);
  Digraph d(n);
  if (n == 1) return d;
  int arcs = rng.below(static_cast<int>(max_arcs * prof.density) + 2);
  std::vector<std::pair<int, int>> pairs;
  for (int e = 0; e < arcs; ++e) {
    int tail, head;
    if (!pairs.empty() && rng.chance(prof.parallel)) {
      auto [t, h] = pairs[static_cast<std::size_t>(rng.below(static_cast<int>(pairs.size())))];
      tail = t;
      head = h;
    } else {
      tail = rng.below(n);
      head = rng.below(n);
      if (head == tail) head = (head + 1) % n;
    }
    d.add_arc(tail, head);
    pairs.emplace_back(tail, head);
  }
  return d;
}

inline EquivOutcome run_decompose_equiv(const Digraph& d, int k, int c, EquivStats& stats,
                                        const OracleLimits& lim = {}, SearchBudget budget = {}) {
  DecomposeResult res = decompose_cplus(d, k, c, lim);
  int worst = 0;
  for (int v = 0; v < d.vertex_count(); ++v) {
    int deg = in_degree(d, d.arcs(), VertexSet::single(v));
    if (deg > worst) worst = deg;
  }
  ArboricityReport arb = fractional_arboricity(d, lim);
  bool checks_ok = worst <= k && arb.num <= static_cast<long long>(k) * arb.den &&
                   static_cast<long long>(d.arc_count()) <=
                       static_cast<long long>(k) * (d.vertex_count() - c);
  BranchingConstraints cons;
  cons.must_cover = true;
  for (int i = 0; i < k; ++i) cons.parts.push_back(IndexSet::single(i));
  cons.part_root_lo.assign(static_cast<std::size_t>(k), c);
  cons.part_root_hi.assign(static_cast<std::size_t>(k), d.vertex_count());
  BfBranchings bf = bf_feasible_decomposition(d, k, cons, budget);
  if (res.ok()) {
    ++stats.solutions;
    if (valid_branchings(d, *res.branchings, true)) {
      bool roots_ok = true;
      for (ArcSet b : *res.branchings)
        if (root_set(d, b).count() < c) roots_ok = false;
      if (roots_ok) ++stats.valid_solutions;
    }
  } else {
    ++stats.certificates;
    if (reverify_decompose(d, k, c, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status);
}

inline EquivOutcome run_spanning_equiv(const Digraph& d, int k, EquivStats& stats,
                                       const OracleLimits& lim = {}, SearchBudget budget = {}) {
  PackResult res = pack_spanning(d, k, lim);
  bool checks_ok = !check_spanning_pack(d, k, lim).has_value();
  BranchingConstraints cons;
  cons.must_cover = false;
  for (int i = 0; i < k; ++i) cons.parts.push_back(IndexSet::single(i));
  cons.part_root_lo.assign(static_cast<std::size_t>(k), 1);
  cons.part_root_hi.assign(static_cast<std::size_t>(k), 1);
  BfBranchings bf = bf_feasible_decomposition(d, k, cons, budget);
  if (res.ok()) {
    ++stats.solutions;
    bool shape_ok = valid_branchings(d, *res.branchings, false);
    for (ArcSet b : *res.branchings)
      if (root_set(d, b).count() != 1) shape_ok = false;
    if (shape_ok) ++stats.valid_solutions;
  } else {
    ++stats.certificates;
    std::vector<IndexSet> parts;
    for (int i = 0; i < k; ++i) parts.push_back(IndexSet::single(i));
    std::vector<int> ones(static_cast<std::size_t>(k), 1);
    PrescribedInstance pi{d, parts, ones, std::vector<VertexSet>(static_cast<std::size_t>(k))};
    if (reverify_cond2(pi, *res.certificate)) ++stats.valid_certificates;
  }
  return record(stats, res.ok(), checks_ok, bf.status);
}

// The covering chain: completability, the two cut forms, the reduced
// instance's covering condition, the greedy cover and the brute-force cover
// must all agree.
inline EquivOutcome run_cover_equiv(const ForestState& st, EquivStats& stats,
                                    const OracleLimits& lim = {}, SearchBudget budget = {}) {
  bool completable = complete_to_spanning(st, st.residual_arcs(), lim).ok();
  bool cut_ok = !check_cond11(st, lim).has_value();
  bool restated_ok = !check_cond54r(st, lim).has_value();
  ReducedCover red = reduce_to_cover(st);
  bool table_ok = !check_cond44(red.instance).has_value();
  CoverResult greedy = cover_greedy(red.instance);
  BfCover bf = bf_cover(red.instance, budget);
  ++stats.runs;
  if (bf.status == BfStatus::budget_exceeded) {
    ++stats.budget_skips;
    return EquivOutcome::budget;
  }
  bool brute_ok = bf.status == BfStatus::feasible;
  bool all_equal = completable == cut_ok && cut_ok == restated_ok && restated_ok == table_ok &&
                   table_ok == greedy.ok() && greedy.ok() == brute_ok;
  if (greedy.ok()) {
    ++stats.solutions;
    bool fine = true;
    std::vector<int> used(static_cast<std::size_t>(red.instance.t_size), 0);
    for (auto [s, t] : *greedy.added) {
      if (std::find(red.instance.edges0.begin(), red.instance.edges0.end(), std::make_pair(s, t)) !=
          red.instance.edges0.end())
        fine = false;
      ++used[static_cast<std::size_t>(t)];
    }
    for (int t = 0; t < red.instance.t_size; ++t)
      if (used[static_cast<std::size_t>(t)] > red.instance.g[static_cast<std::size_t>(t)]) fine = false;
    std::vector<SSet> nbr(static_cast<std::size_t>(red.instance.t_size));
    for (auto [s, t] : red.instance.edges0) nbr[static_cast<std::size_t>(t)] = nbr[static_cast<std::size_t>(t)].with(s);
    for (auto [s, t] : *greedy.added) nbr[static_cast<std::size_t>(t)] = nbr[static_cast<std::size_t>(t)].with(s);
    for_each_nonempty_subset(TSet::full(red.instance.t_size), [&](TSet t0) {
      SSet gamma;
      for (int t : t0) gamma = gamma | nbr[static_cast<std::size_t>(t)];
      if (gamma.count() < red.instance.requirement(t0)) fine = false;
      return true;
    });
    if (fine) ++stats.valid_solutions;
  }
  if (!all_equal) {
    ++stats.mismatches;
    return EquivOutcome::mismatch;
  }
  return EquivOutcome::agree;
}

}  // namespace arbor
