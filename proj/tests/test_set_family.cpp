#include <doctest.h>

#include <algorithm>
#include <vector>

#include "arbor/corpus.hpp"
#include "arbor/oracles.hpp"
#include "arbor/set_family.hpp"

using namespace arbor;

namespace {

ElemSet es(std::initializer_list<int> xs) {
  ElemSet s;
  for (int x : xs) s = s.with(x);
  return s;
}

DisjointFamily fam(int n, std::initializer_list<std::initializer_list<int>> members) {
  std::vector<ElemSet> ms;
  for (auto m : members) ms.push_back(es(m));
  return DisjointFamily(ElemSet::full(n), std::move(ms));
}

// Every family of disjoint nonempty subsets of [n], by brute enumeration.
std::vector<DisjointFamily> all_families(int n) {
  std::vector<DisjointFamily> out;
  for_each_disjoint_family(VertexSet::full(n), [&](const std::vector<VertexSet>& blocks) {
    std::vector<ElemSet> ms;
    for (VertexSet b : blocks) ms.push_back(ElemSet::of_bits(b.bits()));
    out.emplace_back(ElemSet::full(n), std::move(ms));
    return true;
  });
  return out;
}

DisjointFamily random_family(Rng& rng, int n) {
  std::vector<ElemSet> ms;
  ElemSet taken;
  int blocks = rng.below(n + 1);
  for (int b = 0; b < blocks; ++b) {
    ElemSet m = ElemSet::of_bits(rng.eng() & (ElemSet::full(n) - taken).bits());
    if (m.empty()) continue;
    ms.push_back(m);
    taken = taken | m;
  }
  return DisjointFamily(ElemSet::full(n), std::move(ms));
}

}  // namespace

TEST_SUITE_BEGIN("set_family");

TEST_CASE("containment order") {
  CHECK(family_leq(fam(4, {}), fam(4, {{1, 2}})));
  CHECK(family_leq(fam(4, {{1}, {3}}), fam(4, {{1, 3}})));
  CHECK_FALSE(family_leq(fam(4, {{1, 2}}), fam(4, {{1}, {2}})));
  CHECK_THROWS_AS(family_leq(fam(4, {}), fam(5, {})), InputError);
}

TEST_CASE("join and meet on chains and overlaps") {
  CHECK(family_join(fam(4, {{1}, {3}}), fam(4, {{1, 3}})) == fam(4, {{1, 3}}));
  CHECK(family_meet(fam(4, {{1}, {3}}), fam(4, {{1, 3}})) == fam(4, {{1}, {3}}));
  CHECK(family_join(fam(4, {{1, 2}}), fam(4, {{2, 3}})) == fam(4, {{1, 2, 3}}));
  CHECK(family_meet(fam(4, {{1, 2}}), fam(4, {{2, 3}})) == fam(4, {{2}}));
  DisjointFamily f = fam(4, {{0, 1}, {2}});
  CHECK(family_join(f, f) == f);
  CHECK(family_meet(f, f) == f);
}

TEST_CASE("join and meet are the extremal bounds") {
  // oracle: scan every family on three elements for bound extremality
  std::vector<DisjointFamily> all = all_families(3);
  auto check_pair = [&](const DisjointFamily& f1, const DisjointFamily& f2) {
    DisjointFamily join = family_join(f1, f2);
    DisjointFamily meet = family_meet(f1, f2);
    REQUIRE(family_leq(f1, join));
    REQUIRE(family_leq(f2, join));
    REQUIRE(family_leq(meet, f1));
    REQUIRE(family_leq(meet, f2));
    for (const DisjointFamily& g : all) {
      if (family_leq(f1, g) && family_leq(f2, g)) REQUIRE(family_leq(join, g));
      if (family_leq(g, f1) && family_leq(g, f2)) REQUIRE(family_leq(g, meet));
    }
  };
  check_pair(fam(3, {{0, 1}}), fam(3, {{1, 2}}));
  for (std::size_t i = 0; i < all.size(); i += 7)
    for (std::size_t j = 0; j < all.size(); j += 5) check_pair(all[i], all[j]);
}

TEST_CASE("laminar recognition") {
  CHECK(is_laminar(MultiFamily(ElemSet::full(3), {es({1}), es({1, 2})})));
  CHECK_FALSE(is_laminar(MultiFamily(ElemSet::full(3), {es({0, 1}), es({1, 2})})));
  CHECK(is_laminar(MultiFamily(ElemSet::full(3), {es({0, 1}), es({0, 1})})));
}

TEST_CASE("single elimination steps") {
  MultiFamily m(ElemSet::full(3), {es({0, 1}), es({1, 2})});
  CHECK(pieo_step(m, es({0, 1}), es({1, 2}), 1) ==
        MultiFamily(ElemSet::full(3), {es({0, 1, 2}), es({1})}));
  CHECK(pieo_step(m, es({0, 1}), es({1, 2}), 2) == MultiFamily(ElemSet::full(3), {es({0, 1, 2})}));
  CHECK(pieo_step(m, es({0, 1}), es({1, 2}), 3) == MultiFamily(ElemSet::full(3), {es({1})}));
  MultiFamily nested(ElemSet::full(3), {es({1}), es({1, 2})});
  CHECK_THROWS_AS(pieo_step(nested, es({1}), es({1, 2}), 1), ContractError);
}

TEST_CASE("elimination runs on small families") {
  auto out = run_pieo(fam(3, {{0, 1}}), fam(3, {{1, 2}}));
  CHECK(out.upper == fam(3, {{0, 1, 2}}));
  CHECK(out.rest == fam(3, {{1}}));
  CHECK(out.rest.support() == (fam(3, {{0, 1}}).support() & fam(3, {{1, 2}}).support()));

  // already-laminar union ends with no steps, top = join, rest = meet
  DisjointFamily f1 = fam(3, {{0}, {1, 2}});
  DisjointFamily f2 = fam(3, {{1, 2}});
  auto out2 = run_pieo(f1, f2);
  CHECK(out2.trace.steps.empty());
  CHECK(out2.upper == family_join(f1, f2));
  CHECK(out2.rest == family_meet(f1, f2));

  auto out3 = run_pieo(fam(3, {{0, 1}}), fam(3, {{1, 2}}), [](const MultiFamily& g) {
    auto p = first_properly_intersecting_pair(g);
    return PieoStep<ElemTag>{p->first, p->second, 2};
  });
  CHECK(out3.upper == fam(3, {{0, 1, 2}}));
  CHECK(out3.rest == fam(3, {}));
}

TEST_CASE("elimination invariants over random runs") {
  Rng rng(7);
  const int n = 6;
  for (int round = 0; round < 400; ++round) {
    DisjointFamily f1 = random_family(rng, n);
    DisjointFamily f2 = random_family(rng, n);
    bool only12 = round % 2 == 0;
    bool all1 = true;
    auto policy = [&](const MultiFamily& g) {
      std::vector<std::pair<ElemSet, ElemSet>> pairs;
      for (std::size_t i = 0; i < g.members.size(); ++i)
        for (std::size_t j = i + 1; j < g.members.size(); ++j)
          if (properly_intersecting(g.members[i], g.members[j]))
            pairs.emplace_back(g.members[i], g.members[j]);
      auto [x, y] = pairs[static_cast<std::size_t>(rng.below(static_cast<int>(pairs.size())))];
      int type = only12 ? 1 + rng.below(2) : 1 + rng.below(3);
      if (type != 1) all1 = false;
      return PieoStep<ElemTag>{x, y, type};
    };
    auto out = run_pieo(f1, f2, policy);

    CHECK(is_laminar(out.trace.snapshots.back()));
    CHECK(family_leq(out.rest, out.upper));
    for (std::size_t i = 0; i < out.trace.steps.size(); ++i) {
      const MultiFamily& before = out.trace.snapshots[i];
      const MultiFamily& after = out.trace.snapshots[i + 1];
      // per-element counts never grow
      for (int v = 0; v < n; ++v) CHECK(before.count_containing(v) >= after.count_containing(v));
      // the chosen pair is maximal in its snapshot
      auto tops = before.maximal_members();
      CHECK(std::find(tops.begin(), tops.end(), out.trace.steps[i].x) != tops.end());
      CHECK(std::find(tops.begin(), tops.end(), out.trace.steps[i].y) != tops.end());
      // strictly decreasing measure: size or maximal-member count
      CHECK((after.size() < before.size() ||
             after.maximal_members().size() < before.maximal_members().size()));
      if (only12) {
        // every maximal member of every intermediate stage contains a member
        // of the starting multiset
        const MultiFamily& start = out.trace.snapshots[0];
        for (ElemSet z : after.maximal_members()) {
          bool contains_one = false;
          for (ElemSet m : start.members)
            if (m.subset_of(z)) contains_one = true;
          CHECK(contains_one);
        }
      }
    }

    ElemSet both = f1.support() & f2.support();
    CHECK(out.rest.support().subset_of(both));
    bool used_only1 = true;
    for (const auto& s : out.trace.steps)
      if (s.type != 1) used_only1 = false;
    CHECK((out.rest.support() == both) == used_only1);
    (void)all1;

    if (only12) {
      CHECK(out.upper == family_join(f1, f2));
      if (f2.support().subset_of(f1.support())) {
        CHECK(out.upper.size() <= f1.size());
        CHECK((out.upper.size() == f1.size()) == family_leq(f2, f1));
      }
    }
  }
}

TEST_CASE("zero sets of a nonnegative intersecting submodular function are closed") {
  // f(X) = residual in-degree minus missing-forest count, on states where the
  // completion cut holds; f is then nonnegative on nonempty sets
  Rng rng(99);
  GenProfile prof = profile_by_name("tight");
  int checked = 0;
  for (int round = 0; round < 300 && checked < 60; ++round) {
    ForestState st = gen_base_state(rng, prof, GenCaps{4, 3, 9});
    if (check_cond11(st)) continue;
    const Digraph& d = st.inst.graph;
    ArcSet residual = st.residual_arcs();
    auto f = [&](VertexSet x) {
      return in_degree(d, residual, x) -
             missing_forests(st, st.all_indices(), x).count();
    };
    std::vector<VertexSet> zeros;
    for_each_nonempty_subset(st.inst.ground(), [&](VertexSet x) {
      CHECK(f(x) >= 0);
      if (f(x) == 0) zeros.push_back(x);
      return true;
    });
    for (VertexSet x : zeros)
      for (VertexSet y : zeros)
        if (x.intersects(y)) {
          CHECK(f(x | y) == 0);
          CHECK(f(x & y) == 0);
          ++checked;
        }
  }
  CHECK(checked >= 60);
}

TEST_SUITE_END();
