#pragma once

#include <optional>
#include <vector>

#include "arbor/digraph.hpp"
#include "arbor/oracles.hpp"

namespace arbor {

// One accepted move of an augmentation loop.
struct StepAction {
  enum class Kind { add_root_arc, add_internal_arc, decrement_upper };
  Kind kind = Kind::add_root_arc;
  int forest = -1;  // for arc additions
  int arc = -1;
  int part = -1;  // for decrement_upper
};

struct AugmentResult {
  std::optional<std::vector<Arborescence>> forests;  // completions on success
  std::optional<ViolationCertificate> certificate;
  std::vector<StepAction> log;

  bool ok() const { return forests.has_value(); }
};

// Applies one action to a working state, enforcing its preconditions. Shared
// by the solvers and by step-log replay.
inline void apply_step(ForestState& st, const StepAction& step) {
  switch (step.kind) {
    case StepAction::Kind::add_root_arc: {
      if (step.forest < 0 || step.forest >= st.k()) throw InputError("forest index out of range");
      const Arc& a = st.inst.graph.arc(step.arc);
      if (a.tail != st.inst.root) throw InputError("root-arc step on a non-root arc");
      if (!st.residual_arcs().contains(step.arc)) throw InputError("arc already used");
      if (st.covered(step.forest).contains(a.head)) throw InputError("head already in the forest");
      st.forests[step.forest].arcs = st.forests[step.forest].arcs.with(step.arc);
      return;
    }
    case StepAction::Kind::add_internal_arc: {
      if (step.forest < 0 || step.forest >= st.k()) throw InputError("forest index out of range");
      const Arc& a = st.inst.graph.arc(step.arc);
      if (a.tail == st.inst.root) throw InputError("internal-arc step on a root arc");
      if (!st.residual_arcs().contains(step.arc)) throw InputError("arc already used");
      if (!st.covered(step.forest).contains(a.tail)) throw InputError("tail not in the forest");
      if (st.covered(step.forest).contains(a.head) || a.head == st.inst.root)
        throw InputError("head already in the forest");
      st.forests[step.forest].arcs = st.forests[step.forest].arcs.with(step.arc);
      return;
    }
    case StepAction::Kind::decrement_upper: {
      if (!st.upper_active()) throw InputError("no upper bounds to decrement");
      if (step.part < 0 || step.part >= st.part_count()) throw InputError("part index out of range");
      if ((*st.upper)[step.part] <= st.part_root_degree(step.part))
        throw InputError("part has no slack to decrement");
      --(*st.upper)[step.part];
      return;
    }
  }
  throw InputError("unknown step kind");
}

// Replays a recorded action list against a fresh state; returns the final
// forests. Each action is validated exactly as during solving.
inline std::vector<Arborescence> apply_step_log(ForestState st, const std::vector<StepAction>& log) {
  for (const StepAction& s : log) apply_step(st, s);
  return st.forests;
}

namespace detail {

inline StepAction arc_step(const ForestState& st, int forest, int arc) {
  bool root = st.inst.graph.arc(arc).tail == st.inst.root;
  StepAction a;
  a.kind = root ? StepAction::Kind::add_root_arc : StepAction::Kind::add_internal_arc;
  a.forest = forest;
  a.arc = arc;
  return a;
}

inline bool all_spanning(const ForestState& st) {
  for (int i = 0; i < st.k(); ++i)
    if (st.covered(i) != st.inst.ground()) return false;
  return true;
}

// Greedy completion core: repeatedly move an arc from the pool into a forest,
// keeping the pool-restricted completion cut intact. The caller has already
// verified the cut, so a usable arc always exists while some forest is not
// spanning.
inline void complete_in_place(ForestState& st, ArcSet pool, std::vector<StepAction>& log,
                              const OracleLimits& lim) {
  while (!all_spanning(st)) {
    bool stepped = false;
    for (int i = 0; i < st.k() && !stepped; ++i) {
      VertexSet reach = st.covered(i).with(st.inst.root);
      if (reach == st.inst.ground().with(st.inst.root)) continue;
      for (int e : pool) {
        const Arc& a = st.inst.graph.arc(e);
        if (!reach.contains(a.tail) || reach.contains(a.head)) continue;
        st.forests[i].arcs = st.forests[i].arcs.with(e);
        ArcSet rest = pool.without(e);
        if (!check_completion_cut(st, rest, lim)) {
          pool = rest;
          log.push_back(arc_step(st, i, e));
          stepped = true;
          break;
        }
        st.forests[i].arcs = st.forests[i].arcs.without(e);
      }
    }
    if (!stepped) throw ContractError("completion cut holds but no extension step exists");
  }
}

}  // namespace detail

// Completes every forest to a spanning arborescence using only arcs of
// `pool`, or returns the violated completion cut.
inline AugmentResult complete_to_spanning(const ForestState& state, ArcSet pool,
                                          const OracleLimits& lim = {}) {
  if (pool.intersects(state.used_arcs())) throw InputError("pool contains used arcs");
  state.inst.graph.check_arc_set(pool);
  AugmentResult res;
  if (CheckResult cert = check_completion_cut(state, pool, lim)) {
    res.certificate = *cert;
    return res;
  }
  ForestState st = state;
  detail::complete_in_place(st, pool, res.log, lim);
  res.forests = st.forests;
  return res;
}

// Completion under per-part lower bounds on root-arc counts: greedily add
// root arcs into deficient parts as long as the feasibility conditions
// survive, then complete. Certificate on infeasibility.
inline AugmentResult augment_lower(const ForestState& state, const OracleLimits& lim = {}) {
  if (!state.lower_active()) throw InputError("lower bounds are not active");
  if (state.upper_active()) throw InputError("upper bounds must not be active here");
  AugmentResult res;
  if (CheckResult cert = check_cond4(state, lim)) {
    res.certificate = *cert;
    return res;
  }
  ForestState st = state;
  auto deficiency = [&]() {
    long long d = 0;
    for (int a = 0; a < st.part_count(); ++a) {
      long long gap = (*st.lower)[a] - st.part_root_degree(a);
      if (gap > 0) d += gap;
    }
    return d;
  };
  long long before = deficiency();
  while (before > 0) {
    bool stepped = false;
    for (int a = 0; a < st.part_count() && !stepped; ++a) {
      if (st.part_root_degree(a) >= (*st.lower)[a]) continue;
      for (int i : st.parts[a]) {
        for (int e : st.residual_arcs()) {
          const Arc& arc = st.inst.graph.arc(e);
          if (arc.tail != st.inst.root || st.covered(i).contains(arc.head)) continue;
          st.forests[i].arcs = st.forests[i].arcs.with(e);
          if (!check_cond4(st, lim)) {
            res.log.push_back(detail::arc_step(st, i, e));
            stepped = true;
            break;
          }
          st.forests[i].arcs = st.forests[i].arcs.without(e);
        }
        if (stepped) break;
      }
    }
    if (!stepped) throw ContractError("lower-bound conditions hold but no root-arc step exists");
    long long after = deficiency();
    if (after >= before) throw ContractError("deficiency did not decrease");
    before = after;
  }
  if (check_completion_cut(st, st.residual_arcs(), lim))
    throw ContractError("completion cut lost during lower-bound augmentation");
  detail::complete_in_place(st, st.residual_arcs(), res.log, lim);
  res.forests = st.forests;
  return res;
}

namespace detail {

// Upper-bound loop: burn each part's slack either by lowering its cap or by
// adding a root arc, re-checking the cut and cap conditions after every
// candidate; then complete without touching root arcs. Lower bounds, if any,
// are already satisfied and only ever improve.
inline void run_upper_loop(ForestState& st, std::vector<StepAction>& log, const OracleLimits& lim) {
  auto slack_total = [&]() {
    long long s = 0;
    for (int a = 0; a < st.part_count(); ++a) s += (*st.upper)[a] - st.part_root_degree(a);
    return s;
  };
  long long before = slack_total();
  while (before > 0) {
    bool stepped = false;
    for (int a = 0; a < st.part_count() && !stepped; ++a) {
      if (st.part_root_degree(a) >= (*st.upper)[a]) continue;
      --(*st.upper)[a];
      if (!check_cond22(st, lim)) {
        StepAction act;
        act.kind = StepAction::Kind::decrement_upper;
        act.part = a;
        log.push_back(act);
        stepped = true;
      } else {
        ++(*st.upper)[a];
      }
    }
    if (!stepped) {
      // No cap can drop, so some tight family forces every remaining root
      // arc; steer by the extreme tight families first, then scan everything.
      std::vector<std::pair<int, int>> cands;
      auto push = [&](int i, int e) {
        for (auto& c : cands)
          if (c.first == i && c.second == e) return;
        cands.emplace_back(i, e);
      };
      std::optional<VertexFamily> top = maximum_tight_family(st, lim);
      std::optional<VertexFamily> bottom = minimum_tight_family(st, st.all_parts(), lim);
      if (top && bottom) {
        for (int a = 0; a < st.part_count(); ++a) {
          if (st.part_root_degree(a) >= (*st.upper)[a]) continue;
          for (int i : st.parts[a])
            for (VertexSet x0 : top->members) {
              if (x0.intersects(st.covered(i))) continue;
              for (VertexSet y0 : bottom->members) {
                if (!y0.subset_of(x0)) continue;
                for (int e : st.residual_arcs()) {
                  const Arc& arc = st.inst.graph.arc(e);
                  if (arc.tail == st.inst.root && y0.contains(arc.head)) push(i, e);
                }
              }
            }
        }
      }
      for (int a = 0; a < st.part_count(); ++a) {
        if (st.part_root_degree(a) >= (*st.upper)[a]) continue;
        for (int i : st.parts[a])
          for (int e : st.residual_arcs()) {
            const Arc& arc = st.inst.graph.arc(e);
            if (arc.tail == st.inst.root && !st.covered(i).contains(arc.head)) push(i, e);
          }
      }
      for (auto [i, e] : cands) {
        st.forests[i].arcs = st.forests[i].arcs.with(e);
        if (!check_cond11(st, lim) && !check_cond22(st, lim)) {
          log.push_back(arc_step(st, i, e));
          stepped = true;
          break;
        }
        st.forests[i].arcs = st.forests[i].arcs.without(e);
      }
    }
    if (!stepped) throw ContractError("upper-bound conditions hold but no step exists");
    long long after = slack_total();
    if (after >= before) throw ContractError("slack did not decrease");
    before = after;
  }
  // with every cap met, the cap condition pins the cut over non-root arcs
  if (check_completion_cut(st, st.residual_nonroot_arcs(), lim))
    throw ContractError("non-root completion cut lost during cap augmentation");
  complete_in_place(st, st.residual_nonroot_arcs(), log, lim);
}

}  // namespace detail

// Completion under per-part upper bounds on root-arc counts.
inline AugmentResult augment_upper(const ForestState& state, const OracleLimits& lim = {}) {
  if (!state.upper_active()) throw InputError("upper bounds are not active");
  if (state.lower_active()) throw InputError("lower bounds must not be active here");
  AugmentResult res;
  if (CheckResult cert = check_cond11(state, lim)) {
    res.certificate = *cert;
    return res;
  }
  if (CheckResult cert = check_cond22(state, lim)) {
    res.certificate = *cert;
    return res;
  }
  ForestState st = state;
  detail::run_upper_loop(st, res.log, lim);
  res.forests = st.forests;
  return res;
}

// Completion with both bound vectors active: first clear every lower-bound
// deficiency with root arcs that keep both conditions alive, then run the
// upper-bound loop (adding root arcs never breaks a met lower bound).
inline AugmentResult augment_both(const ForestState& state, const OracleLimits& lim = {}) {
  if (!state.lower_active() || !state.upper_active())
    throw InputError("both bound vectors must be active");
  AugmentResult res;
  if (CheckResult cert = check_cond4(state, lim)) {
    res.certificate = *cert;
    return res;
  }
  if (CheckResult cert = check_cond22(state, lim)) {
    res.certificate = *cert;
    return res;
  }
  ForestState st = state;
  auto deficiency = [&]() {
    long long d = 0;
    for (int a = 0; a < st.part_count(); ++a) {
      long long gap = (*st.lower)[a] - st.part_root_degree(a);
      if (gap > 0) d += gap;
    }
    return d;
  };
  long long before = deficiency();
  while (before > 0) {
    bool stepped = false;
    for (int a = 0; a < st.part_count() && !stepped; ++a) {
      if (st.part_root_degree(a) >= (*st.lower)[a]) continue;
      for (int i : st.parts[a]) {
        for (int e : st.residual_arcs()) {
          const Arc& arc = st.inst.graph.arc(e);
          if (arc.tail != st.inst.root || st.covered(i).contains(arc.head)) continue;
          st.forests[i].arcs = st.forests[i].arcs.with(e);
          if (!check_cond4(st, lim) && !check_cond22(st, lim)) {
            res.log.push_back(detail::arc_step(st, i, e));
            stepped = true;
            break;
          }
          st.forests[i].arcs = st.forests[i].arcs.without(e);
        }
        if (stepped) break;
      }
    }
    if (!stepped) throw ContractError("two-sided conditions hold but no root-arc step exists");
    long long after = deficiency();
    if (after >= before) throw ContractError("deficiency did not decrease");
    before = after;
  }
  detail::run_upper_loop(st, res.log, lim);
  res.forests = st.forests;
  return res;
}

}  // namespace arbor
