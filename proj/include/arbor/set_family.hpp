#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "arbor/errors.hpp"
#include "arbor/small_set.hpp"

namespace arbor {

// A family of pairwise-disjoint nonempty subsets of a ground set, kept in
// canonical (ascending bitmask) member order.
template <class Tag>
struct BasicDisjointFamily {
  SmallSet<Tag> ground;
  std::vector<SmallSet<Tag>> members;

  BasicDisjointFamily() = default;
  BasicDisjointFamily(SmallSet<Tag> g, std::vector<SmallSet<Tag>> m)
      : ground(g), members(std::move(m)) {
    std::sort(members.begin(), members.end());
    SmallSet<Tag> seen;
    for (SmallSet<Tag> x : members) {
      if (x.empty()) throw InputError("family member is empty");
      if (!x.subset_of(ground)) throw InputError("family member exceeds ground set");
      if (x.intersects(seen)) throw InputError("family members are not disjoint");
      seen = seen | x;
    }
  }

  SmallSet<Tag> support() const {
    SmallSet<Tag> u;
    for (SmallSet<Tag> x : members) u = u | x;
    return u;
  }
  int size() const { return static_cast<int>(members.size()); }

  friend bool operator==(const BasicDisjointFamily& a, const BasicDisjointFamily& b) {
    return a.ground == b.ground && a.members == b.members;
  }
};

// A multiset of subsets of the ground set; duplicates allowed, canonical order.
template <class Tag>
struct BasicMultiFamily {
  SmallSet<Tag> ground;
  std::vector<SmallSet<Tag>> members;

  BasicMultiFamily() = default;
  BasicMultiFamily(SmallSet<Tag> g, std::vector<SmallSet<Tag>> m)
      : ground(g), members(std::move(m)) {
    for (SmallSet<Tag> x : members)
      if (!x.subset_of(ground)) throw InputError("family member exceeds ground set");
    std::sort(members.begin(), members.end());
  }

  // Number of members containing element v, with multiplicity.
  int count_containing(int v) const {
    int c = 0;
    for (SmallSet<Tag> x : members)
      if (x.contains(v)) ++c;
    return c;
  }
  SmallSet<Tag> support() const {
    SmallSet<Tag> u;
    for (SmallSet<Tag> x : members) u = u | x;
    return u;
  }
  int size() const { return static_cast<int>(members.size()); }

  // Distinct members not strictly contained in another member.
  std::vector<SmallSet<Tag>> maximal_members() const {
    std::vector<SmallSet<Tag>> out;
    for (SmallSet<Tag> x : members) {
      if (!out.empty() && out.back() == x) continue;
      bool dominated = false;
      for (SmallSet<Tag> y : members)
        if (x != y && x.subset_of(y)) {
          dominated = true;
          break;
        }
      if (!dominated) out.push_back(x);
    }
    return out;
  }

  friend bool operator==(const BasicMultiFamily& a, const BasicMultiFamily& b) {
    return a.ground == b.ground && a.members == b.members;
  }
};

// F1 <= F2: every member of F1 is contained in some member of F2.
template <class Tag>
bool family_leq(const BasicDisjointFamily<Tag>& f1, const BasicDisjointFamily<Tag>& f2) {
  if (f1.ground != f2.ground) throw InputError("families over different ground sets");
  for (SmallSet<Tag> x : f1.members) {
    bool held = false;
    for (SmallSet<Tag> y : f2.members)
      if (x.subset_of(y)) {
        held = true;
        break;
      }
    if (!held) return false;
  }
  return true;
}

// Least upper bound: unions of connected components of the "intersects" graph
// on the combined member list.
template <class Tag>
BasicDisjointFamily<Tag> family_join(const BasicDisjointFamily<Tag>& f1,
                                     const BasicDisjointFamily<Tag>& f2) {
  if (f1.ground != f2.ground) throw InputError("families over different ground sets");
  std::vector<SmallSet<Tag>> blocks = f1.members;
  blocks.insert(blocks.end(), f2.members.begin(), f2.members.end());
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < blocks.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < blocks.size() && !merged; ++j)
        if (blocks[i].intersects(blocks[j])) {
          blocks[i] = blocks[i] | blocks[j];
          blocks.erase(blocks.begin() + static_cast<long>(j));
          merged = true;
        }
  }
  return BasicDisjointFamily<Tag>(f1.ground, std::move(blocks));
}

// Greatest lower bound: all nonempty pairwise intersections.
template <class Tag>
BasicDisjointFamily<Tag> family_meet(const BasicDisjointFamily<Tag>& f1,
                                     const BasicDisjointFamily<Tag>& f2) {
  if (f1.ground != f2.ground) throw InputError("families over different ground sets");
  std::vector<SmallSet<Tag>> out;
  for (SmallSet<Tag> x : f1.members)
    for (SmallSet<Tag> y : f2.members)
      if (x.intersects(y)) out.push_back(x & y);
  return BasicDisjointFamily<Tag>(f1.ground, std::move(out));
}

// Laminar: no two members properly intersect (equal sets never do).
template <class Tag>
bool is_laminar(const BasicMultiFamily<Tag>& m) {
  for (std::size_t i = 0; i < m.members.size(); ++i)
    for (std::size_t j = i + 1; j < m.members.size(); ++j)
      if (properly_intersecting(m.members[i], m.members[j])) return false;
  return true;
}

// First properly intersecting pair in canonical member order, if any.
template <class Tag>
std::optional<std::pair<SmallSet<Tag>, SmallSet<Tag>>> first_properly_intersecting_pair(
    const BasicMultiFamily<Tag>& m) {
  for (std::size_t i = 0; i < m.members.size(); ++i)
    for (std::size_t j = i + 1; j < m.members.size(); ++j)
      if (properly_intersecting(m.members[i], m.members[j]))
        return std::make_pair(m.members[i], m.members[j]);
  return std::nullopt;
}

// Replaces a properly intersecting pair {X,Y} by union and/or intersection.
// Type 1: both; type 2: union only; type 3: intersection only.
template <class Tag>
BasicMultiFamily<Tag> pieo_step(const BasicMultiFamily<Tag>& m, SmallSet<Tag> x, SmallSet<Tag> y,
                                int type) {
  if (type < 1 || type > 3) throw InputError("step type must be 1, 2 or 3");
  if (!properly_intersecting(x, y)) throw ContractError("pieo step on a non properly intersecting pair");
  std::vector<SmallSet<Tag>> rest = m.members;
  auto remove_one = [&](SmallSet<Tag> s) {
    auto it = std::find(rest.begin(), rest.end(), s);
    if (it == rest.end()) throw ContractError("pieo step on a non-member");
    rest.erase(it);
  };
  remove_one(x);
  remove_one(y);
  if (type == 1 || type == 2) rest.push_back(x | y);
  if (type == 1 || type == 3) rest.push_back(x & y);
  return BasicMultiFamily<Tag>(m.ground, std::move(rest));
}

template <class Tag>
struct PieoStep {
  SmallSet<Tag> x, y;
  int type = 1;
};

// Full record of an elimination run: every chosen step plus the multifamily
// before and after each of them.
template <class Tag>
struct BasicPieoTrace {
  std::vector<PieoStep<Tag>> steps;
  std::vector<BasicMultiFamily<Tag>> snapshots;  // snapshots.size() == steps.size() + 1
};

template <class Tag>
struct PieoOutcome {
  BasicDisjointFamily<Tag> upper;  // maximal members of the final laminar multifamily
  BasicDisjointFamily<Tag> rest;   // what remains after removing one copy of each
  BasicPieoTrace<Tag> trace;
};

// Runs properly-intersecting elimination on the multiset union of two disjoint
// families until laminar. The policy picks the pair and step type; the default
// takes the first pair in canonical order with type 1.
template <class Tag, class Policy>
PieoOutcome<Tag> run_pieo(const BasicDisjointFamily<Tag>& f1, const BasicDisjointFamily<Tag>& f2,
                          Policy&& policy) {
  if (f1.ground != f2.ground) throw InputError("families over different ground sets");
  std::vector<SmallSet<Tag>> all = f1.members;
  all.insert(all.end(), f2.members.begin(), f2.members.end());
  BasicMultiFamily<Tag> g(f1.ground, std::move(all));

  BasicPieoTrace<Tag> trace;
  trace.snapshots.push_back(g);
  while (!is_laminar(g)) {
    PieoStep<Tag> step = policy(g);
    g = pieo_step(g, step.x, step.y, step.type);
    trace.steps.push_back(step);
    trace.snapshots.push_back(g);
  }

  std::vector<SmallSet<Tag>> tops = g.maximal_members();
  std::vector<SmallSet<Tag>> rest = g.members;
  for (SmallSet<Tag> t : tops) {
    auto it = std::find(rest.begin(), rest.end(), t);
    rest.erase(it);
  }
  return PieoOutcome<Tag>{BasicDisjointFamily<Tag>(g.ground, std::move(tops)),
                          BasicDisjointFamily<Tag>(g.ground, std::move(rest)), std::move(trace)};
}

template <class Tag>
PieoOutcome<Tag> run_pieo(const BasicDisjointFamily<Tag>& f1, const BasicDisjointFamily<Tag>& f2) {
  return run_pieo(f1, f2, [](const BasicMultiFamily<Tag>& g) {
    auto pair = first_properly_intersecting_pair(g);
    if (!pair) throw ContractError("policy invoked on a laminar multifamily");
    return PieoStep<Tag>{pair->first, pair->second, 1};
  });
}

using DisjointFamily = BasicDisjointFamily<ElemTag>;
using MultiFamily = BasicMultiFamily<ElemTag>;
using PieoTrace = BasicPieoTrace<ElemTag>;

}  // namespace arbor
