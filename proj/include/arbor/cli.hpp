#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "arbor/corpus.hpp"
#include "arbor/decompose.hpp"
#include "arbor/io.hpp"
#include "arbor/pack.hpp"

// Command implementations behind the command-line tool. Exit contract:
// 0 = condition holds / solution found, 1 = violation / infeasible,
// 2 = malformed input or operational error.

namespace arbor {

namespace cli_detail {

inline ForestState state_from_instance(const Instance& in) {
  if (!in.graph) throw InputError("missing vertices/arcs");
  if (!in.root) throw InputError("missing root");
  std::vector<Arborescence> forests;
  if (in.forests)
    for (ArcSet f : *in.forests) forests.push_back(Arborescence{*in.root, f});
  std::vector<IndexSet> parts;
  if (in.partition) parts = *in.partition;
  return make_forest_state(RootedInstance(*in.graph, *in.root), std::move(forests), std::move(parts),
                           in.lower, in.upper);
}

inline std::vector<IndexSet> parts_or_singletons(const Instance& in, int k) {
  if (in.partition) return *in.partition;
  std::vector<IndexSet> parts;
  for (int i = 0; i < k; ++i) parts.push_back(IndexSet::single(i));
  return parts;
}

inline PrescribedInstance prescribed_from_instance(const Instance& in, const Digraph& d) {
  if (!in.c_prime) throw InputError("missing c_prime");
  int k = in.k ? *in.k : (in.u_sets ? static_cast<int>(in.u_sets->size()) : 0);
  if (k <= 0) throw InputError("missing k");
  std::vector<VertexSet> u(static_cast<std::size_t>(k));
  if (in.u_sets) {
    if (static_cast<int>(in.u_sets->size()) != k) throw InputError("U size differs from k");
    u = *in.u_sets;
  }
  return PrescribedInstance{d, parts_or_singletons(in, k), *in.c_prime, u};
}

inline Json ok_result() {
  Json j = Json::object();
  j["status"] = "solution";
  return j;
}

inline Json infeasible_result(const Instance& in, const ViolationCertificate& c) {
  Json j = Json::object();
  j["status"] = "infeasible";
  j["certificate"] = certificate_json(in, c);
  return j;
}

inline Json bipartite_cert_json(const BipartiteSide& side, TSet t0) {
  Json certj = Json::object();
  Json family = Json::array();
  std::vector<std::string> names;
  for (int t : t0) names.push_back(side.tnames.name(t));
  family.push_back(names);
  certj["family"] = std::move(family);
  certj["I"] = Json::array();
  certj["condition"] = "cond44";
  long long lhs = side.instance.neighbors(t0).count();
  for (int t : t0) lhs += side.instance.g[static_cast<std::size_t>(t)];
  certj["lhs"] = lhs;
  certj["rhs"] = side.instance.requirement(t0);
  return certj;
}

inline Json arc_sets_json(const std::vector<ArcSet>& sets) {
  Json out = Json::array();
  for (ArcSet s : sets) {
    Json one = Json::array();
    for (int e : s) one.push_back(e);
    out.push_back(std::move(one));
  }
  return out;
}

}  // namespace cli_detail

// Verifies one named condition of the instance. Writes the result document
// and returns the exit code.
inline int run_check(const Json& instance_json, const std::string& condition, Json& out) {
  try {
    Instance in = parse_instance(instance_json);
    OracleLimits lim;
    CheckResult cert;
    if (condition == "cond11" || condition == "cond54r") {
      ForestState st = cli_detail::state_from_instance(in);
      cert = condition == "cond11" ? check_cond11(st, lim) : check_cond54r(st, lim);
    } else if (condition == "cond4") {
      ForestState st = cli_detail::state_from_instance(in);
      cert = check_cond4(st, lim);
    } else if (condition == "cond22") {
      ForestState st = cli_detail::state_from_instance(in);
      cert = check_cond22(st, lim);
    } else if (condition == "cond2") {
      cert = check_cond2(cli_detail::prescribed_from_instance(in, in.digraph()), lim);
    } else if (condition == "edmonds") {
      if (!in.rootsets) throw InputError("missing rootsets");
      cert = check_edmonds(in.digraph(), *in.rootsets, lim);
    } else if (condition == "spanning") {
      if (!in.k) throw InputError("missing k");
      cert = check_spanning_pack(in.digraph(), *in.k, lim);
    } else if (condition == "cai_frank") {
      if (!in.k) throw InputError("missing k");
      if (!in.f_per_vertex || !in.g_per_vertex) throw InputError("missing f or g");
      cert = check_cai_frank(in.digraph(), *in.k, *in.f_per_vertex, *in.g_per_vertex, lim);
    } else if (condition == "cond44") {
      if (!in.bipartite) throw InputError("missing bipartite fields");
      if (std::optional<TSet> bad = check_cond44(in.bipartite->instance)) {
        out = Json::object();
        out["status"] = "infeasible";
        out["certificate"] = cli_detail::bipartite_cert_json(*in.bipartite, *bad);
        return 1;
      }
      out = cli_detail::ok_result();
      return 0;
    } else if (condition == "arboricity") {
      ArboricityReport rep = fractional_arboricity(in.digraph(), lim);
      out = cli_detail::ok_result();
      Json arb = Json::object();
      arb["num"] = rep.num;
      arb["den"] = rep.den;
      arb["witness"] = in.set_names(rep.witness);
      out["arboricity"] = std::move(arb);
      return 0;
    } else {
      throw InputError("unknown condition: " + condition);
    }
    if (cert) {
      out = cli_detail::infeasible_result(in, *cert);
      return 1;
    }
    out = cli_detail::ok_result();
    return 0;
  } catch (const std::exception& e) {
    out = Json::object();
    out["status"] = "error";
    out["message"] = e.what();
    return 2;
  }
}

// Dispatches a solve mode. Solution or certificate lands in `out`.
inline int run_solve(const Json& instance_json, const std::string& mode_override, Json& out) {
  try {
    Instance in = parse_instance(instance_json);
    std::string mode = mode_override.empty() ? in.mode : mode_override;
    if (mode.empty()) throw InputError("missing mode");
    OracleLimits lim;

    auto emit_augment = [&](const AugmentResult& res) {
      if (!res.ok()) {
        out = cli_detail::infeasible_result(in, *res.certificate);
        return 1;
      }
      out = Json::object();
      out["status"] = "solution";
      std::vector<ArcSet> arcs;
      for (const Arborescence& f : *res.forests) arcs.push_back(f.arcs);
      out["forests"] = cli_detail::arc_sets_json(arcs);
      out["step_log"] = step_log_json(res.log);
      return 0;
    };
    auto emit_pack = [&](const PackResult& res) {
      if (!res.ok()) {
        out = cli_detail::infeasible_result(in, *res.certificate);
        return 1;
      }
      out = Json::object();
      out["status"] = "solution";
      out["branchings"] = cli_detail::arc_sets_json(*res.branchings);
      return 0;
    };

    if (mode == "complete") {
      ForestState st = cli_detail::state_from_instance(in);
      return emit_augment(complete_to_spanning(st, st.residual_arcs(), lim));
    }
    if (mode == "augment_lower") {
      return emit_augment(augment_lower(cli_detail::state_from_instance(in), lim));
    }
    if (mode == "augment_upper") {
      return emit_augment(augment_upper(cli_detail::state_from_instance(in), lim));
    }
    if (mode == "augment_both") {
      return emit_augment(augment_both(cli_detail::state_from_instance(in), lim));
    }
    if (mode == "pack_rootsets") {
      if (!in.rootsets) throw InputError("missing rootsets");
      return emit_pack(pack_rootsets(in.digraph(), *in.rootsets, lim));
    }
    if (mode == "pack_prescribed") {
      PrescribedInstance pi = cli_detail::prescribed_from_instance(in, in.digraph());
      return emit_pack(pack_prescribed(in.digraph(), pi.parts, pi.c_prime, pi.u, lim));
    }
    if (mode == "pack_exact") {
      if (!in.c_list) throw InputError("missing c (one size per branching)");
      return emit_pack(pack_exact_sizes(in.digraph(), *in.c_list, lim));
    }
    if (mode == "pack_spanning") {
      if (!in.k) throw InputError("missing k");
      return emit_pack(pack_spanning(in.digraph(), *in.k, lim));
    }
    if (mode == "decompose" || mode == "decompose_cplus") {
      if (!in.k) throw InputError("missing k");
      int c = mode == "decompose" ? 0 : (in.c_scalar ? *in.c_scalar : 0);
      DecomposeResult res = decompose_cplus(in.digraph(), *in.k, c, lim);
      if (!res.ok()) {
        out = cli_detail::infeasible_result(in, *res.certificate);
        return 1;
      }
      out = Json::object();
      out["status"] = "solution";
      out["branchings"] = cli_detail::arc_sets_json(*res.branchings);
      return 0;
    }
    if (mode == "balance") {
      if (!in.branchings) throw InputError("missing branchings");
      std::vector<ArcSet> bs = balance_decomposition(in.digraph(), *in.branchings, lim);
      out = Json::object();
      out["status"] = "solution";
      out["branchings"] = cli_detail::arc_sets_json(bs);
      return 0;
    }
    if (mode == "cover") {
      if (!in.bipartite) throw InputError("missing bipartite fields");
      CoverResult res = cover_greedy(in.bipartite->instance);
      if (!res.ok()) {
        out = Json::object();
        out["status"] = "infeasible";
        out["certificate"] = cli_detail::bipartite_cert_json(*in.bipartite, *res.violating);
        return 1;
      }
      out = Json::object();
      out["status"] = "solution";
      Json edges = Json::array();
      for (auto [s, t] : *res.added)
        edges.push_back(Json::array(
            {in.bipartite->snames.name(s), in.bipartite->tnames.name(t)}));
      out["cover_edges"] = std::move(edges);
      return 0;
    }
    throw InputError("unknown mode: " + mode);
  } catch (const std::exception& e) {
    out = Json::object();
    out["status"] = "error";
    out["message"] = e.what();
    return 2;
  }
}

// Re-runs a solve's recorded actions against the instance and emits the same
// result document shape; byte equality with the original output is the
// replay guarantee.
inline int run_replay(const Json& instance_json, const Json& step_log, Json& out) {
  try {
    Instance in = parse_instance(instance_json);
    ForestState st = cli_detail::state_from_instance(in);
    std::vector<StepAction> log = parse_step_log(step_log);
    std::vector<Arborescence> forests = apply_step_log(st, log);
    out = Json::object();
    out["status"] = "solution";
    std::vector<ArcSet> arcs;
    for (const Arborescence& f : forests) arcs.push_back(f.arcs);
    out["forests"] = cli_detail::arc_sets_json(arcs);
    out["step_log"] = step_log;
    return 0;
  } catch (const std::exception& e) {
    out = Json::object();
    out["status"] = "error";
    out["message"] = e.what();
    return 2;
  }
}

struct CorpusOptions {
  std::uint64_t seed = 1;
  int count = 50;
  int max_v = 4;
  std::string profile = "tight";
  long long budget = 20'000'000;
  bool corrupt_first = false;  // harness self-test: flip one verdict
};

// Seeded random agreement sweep across the theorems; prints one row per
// instance and a summary, returns nonzero on any disagreement.
inline int run_corpus(const CorpusOptions& opt, std::ostream& os) {
  GenProfile prof = profile_by_name(opt.profile);
  GenCaps caps;
  caps.max_v = opt.max_v;
  SearchBudget budget;
  budget.max_nodes = opt.budget;
  OracleLimits lim;
  EquivStats stats;

  auto tag = [](EquivOutcome o) {
    switch (o) {
      case EquivOutcome::agree: return "ok";
      case EquivOutcome::mismatch: return "MISMATCH";
      default: return "budget";
    }
  };

  os << "idx profile  completion lower      upper      both       spanning   decompose  cover\n";
  for (int idx = 0; idx < opt.count; ++idx) {
    Rng rng(opt.seed * 1000003 + static_cast<std::uint64_t>(idx));
    ForestState base = gen_base_state(rng, prof, caps);
    std::vector<int> lower = gen_lower_bounds(rng, prof, base);
    std::vector<int> upper = gen_upper_bounds(rng, prof, base, &lower);

    EquivOutcome completion =
        run_completion_equiv(base, stats, lim, budget, opt.corrupt_first && idx == 0);
    EquivOutcome lower_o = run_lower_equiv(base, lower, stats, lim, budget);
    EquivOutcome upper_o = run_upper_equiv(base, upper, stats, lim, budget);
    EquivOutcome both_o = run_both_equiv(base, lower, upper, stats, lim, budget);

    Digraph d = gen_plain_digraph(rng, prof, opt.max_v, 8);
    int k = 1 + rng.below(3);
    int c = rng.below(d.vertex_count() + 1);
    EquivOutcome span_o = run_spanning_equiv(d, k, stats, lim, budget);
    EquivOutcome dec_o = run_decompose_equiv(d, k, c, stats, lim, budget);
    EquivOutcome cover_o = run_cover_equiv(base, stats, lim, budget);

    os << idx << "   " << opt.profile << "   " << tag(completion) << "  " << tag(lower_o) << "  "
       << tag(upper_o) << "  " << tag(both_o) << "  " << tag(span_o) << "  " << tag(dec_o) << "  "
       << tag(cover_o) << "\n";
  }
  os << "runs=" << stats.runs << " mismatches=" << stats.mismatches
     << " budget_skips=" << stats.budget_skips << " solutions=" << stats.solutions << "/"
     << stats.valid_solutions << " certificates=" << stats.certificates << "/"
     << stats.valid_certificates << "\n";
  if (stats.mismatches > 0) return 1;
  if (stats.valid_solutions != stats.solutions || stats.valid_certificates != stats.certificates)
    return 1;
  return 0;
}

}  // namespace arbor
