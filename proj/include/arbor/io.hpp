#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbor/augment.hpp"
#include "arbor/bipartite.hpp"
#include "arbor/digraph.hpp"
#include "arbor/oracles.hpp"

// JSON instance and result files. Keys keep a fixed insertion order so output
// is byte-stable and diffable.

namespace arbor {

using Json = nlohmann::ordered_json;

struct NameTable {
  std::vector<std::string> names;
  std::map<std::string, int> ids;

  int add(const std::string& s) {
    if (ids.count(s)) throw InputError("duplicate name: " + s);
    ids[s] = static_cast<int>(names.size());
    names.push_back(s);
    return ids[s];
  }
  int id(const std::string& s) const {
    auto it = ids.find(s);
    if (it == ids.end()) throw InputError("unknown name: " + s);
    return it->second;
  }
  const std::string& name(int i) const { return names[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(names.size()); }
};

// Bipartite side of an instance, with its own name tables.
struct BipartiteSide {
  NameTable snames, tnames;
  BipartiteInstance instance;
};

// In-memory form of an instance file: a digraph with optional root, forests,
// partition and bounds, plus mode-specific extras.
struct Instance {
  NameTable vnames;
  std::optional<Digraph> graph;
  std::optional<int> root;
  std::optional<std::vector<ArcSet>> forests;
  std::optional<std::vector<IndexSet>> partition;
  std::optional<std::vector<int>> lower, upper;
  std::string mode;
  std::optional<int> k;
  std::optional<std::vector<VertexSet>> rootsets;
  std::optional<std::vector<VertexSet>> u_sets;
  std::optional<std::vector<int>> c_list;
  std::optional<int> c_scalar;
  std::optional<std::vector<int>> c_prime;
  std::optional<std::vector<int>> f_per_vertex, g_per_vertex;
  std::optional<std::vector<ArcSet>> branchings;
  std::optional<BipartiteSide> bipartite;

  const Digraph& digraph() const {
    if (!graph) throw InputError("instance has no digraph");
    return *graph;
  }
  VertexSet name_set(const std::vector<std::string>& v) const {
    VertexSet s;
    for (const std::string& n : v) s = s.with(vnames.id(n));
    return s;
  }
  std::vector<std::string> set_names(VertexSet s) const {
    std::vector<std::string> out;
    for (int v : s) out.push_back(vnames.name(v));
    return out;
  }
};

namespace io_detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field: ") + key);
  return j.at(key);
}

inline std::vector<int> int_list(const Json& j, const char* key) {
  std::vector<int> out;
  for (const Json& e : field(j, key)) {
    if (!e.is_number_integer()) throw InputError(std::string(key) + " must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

inline ArcSet arc_id_set(const Json& j, int arc_count) {
  ArcSet s;
  for (const Json& e : j) {
    if (!e.is_number_integer()) throw InputError("arc index must be an integer");
    int id = e.get<int>();
    if (id < 0 || id >= arc_count) throw InputError("arc index out of range");
    if (s.contains(id)) throw InputError("duplicate arc index");
    s = s.with(id);
  }
  return s;
}

inline std::vector<int> per_vertex_table(const Json& j, const NameTable& names) {
  std::vector<int> out(static_cast<std::size_t>(names.size()), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer()) throw InputError("table values must be integers");
    out[static_cast<std::size_t>(names.id(it.key()))] = it.value().get<int>();
  }
  return out;
}

inline std::string subset_key(const std::vector<std::string>& names) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) key += ',';
    key += sorted[i];
  }
  return key;
}

}  // namespace io_detail

inline Instance parse_instance(const Json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object");
  Instance in;
  if (j.contains("vertices")) {
    for (const Json& v : j.at("vertices")) in.vnames.add(v.get<std::string>());
    Digraph g(in.vnames.size());
    if (j.contains("arcs"))
      for (const Json& a : j.at("arcs")) {
        if (!a.is_array() || a.size() != 2) throw InputError("arc must be a [tail, head] pair");
        g.add_arc(in.vnames.id(a[0].get<std::string>()), in.vnames.id(a[1].get<std::string>()));
      }
    in.graph = std::move(g);
  }
  if (j.contains("root")) {
    if (!in.graph) throw InputError("root given without vertices");
    in.root = in.vnames.id(j.at("root").get<std::string>());
  }
  if (j.contains("forests")) {
    std::vector<ArcSet> fs;
    for (const Json& f : j.at("forests")) fs.push_back(io_detail::arc_id_set(f, in.digraph().arc_count()));
    in.forests = std::move(fs);
  }
  if (j.contains("branchings")) {
    std::vector<ArcSet> bs;
    for (const Json& f : j.at("branchings"))
      bs.push_back(io_detail::arc_id_set(f, in.digraph().arc_count()));
    in.branchings = std::move(bs);
  }
  if (j.contains("partition")) {
    std::vector<IndexSet> parts;
    for (const Json& p : j.at("partition")) {
      IndexSet s;
      for (const Json& e : p) {
        int i = e.get<int>();
        if (i < 0 || i >= 64) throw InputError("forest index out of range");
        s = s.with(i);
      }
      parts.push_back(s);
    }
    in.partition = std::move(parts);
  }
  if (j.contains("lower")) in.lower = io_detail::int_list(j, "lower");
  if (j.contains("upper")) in.upper = io_detail::int_list(j, "upper");
  if (j.contains("mode")) in.mode = j.at("mode").get<std::string>();
  if (j.contains("k")) in.k = j.at("k").get<int>();
  if (j.contains("rootsets")) {
    std::vector<VertexSet> rs;
    for (const Json& r : j.at("rootsets")) rs.push_back(in.name_set(r.get<std::vector<std::string>>()));
    in.rootsets = std::move(rs);
  }
  if (j.contains("U")) {
    std::vector<VertexSet> us;
    for (const Json& r : j.at("U")) us.push_back(in.name_set(r.get<std::vector<std::string>>()));
    in.u_sets = std::move(us);
  }
  if (j.contains("c")) {
    if (j.at("c").is_array())
      in.c_list = io_detail::int_list(j, "c");
    else
      in.c_scalar = j.at("c").get<int>();
  }
  if (j.contains("c_prime")) in.c_prime = io_detail::int_list(j, "c_prime");
  if (j.contains("f")) in.f_per_vertex = io_detail::per_vertex_table(j.at("f"), in.vnames);
  if (j.contains("g") && in.graph) in.g_per_vertex = io_detail::per_vertex_table(j.at("g"), in.vnames);
  if (j.contains("S")) {
    BipartiteSide side;
    for (const Json& s : io_detail::field(j, "S")) side.snames.add(s.get<std::string>());
    for (const Json& t : io_detail::field(j, "T")) side.tnames.add(t.get<std::string>());
    std::vector<std::pair<int, int>> e0;
    if (j.contains("E0"))
      for (const Json& e : j.at("E0")) {
        if (!e.is_array() || e.size() != 2) throw InputError("E0 entry must be an [s, t] pair");
        e0.emplace_back(side.snames.id(e[0].get<std::string>()),
                        side.tnames.id(e[1].get<std::string>()));
      }
    std::vector<int> p(std::size_t{1} << side.tnames.size(), 0);
    if (j.contains("p_T"))
      for (auto it = j.at("p_T").begin(); it != j.at("p_T").end(); ++it) {
        std::uint64_t mask = 0;
        std::stringstream ss(it.key());
        std::string piece;
        while (std::getline(ss, piece, ',')) mask |= std::uint64_t{1} << side.tnames.id(piece);
        if (mask == 0) throw InputError("p_T key names an empty subset");
        p[mask] = it.value().get<int>();
      }
    std::vector<int> g(static_cast<std::size_t>(side.tnames.size()), 0);
    if (j.contains("g"))
      for (auto it = j.at("g").begin(); it != j.at("g").end(); ++it)
        g[static_cast<std::size_t>(side.tnames.id(it.key()))] = it.value().get<int>();
    side.instance = make_bipartite_instance(side.snames.size(), side.tnames.size(), std::move(e0),
                                            std::move(p), std::move(g));
    in.bipartite = std::move(side);
  }
  return in;
}

inline Json serialize_instance(const Instance& in) {
  Json j = Json::object();
  if (in.graph) {
    j["vertices"] = in.vnames.names;
    Json arcs = Json::array();
    for (int e = 0; e < in.graph->arc_count(); ++e) {
      const Arc& a = in.graph->arc(e);
      arcs.push_back(Json::array({in.vnames.name(a.tail), in.vnames.name(a.head)}));
    }
    j["arcs"] = std::move(arcs);
  }
  if (in.root) j["root"] = in.vnames.name(*in.root);
  auto arc_lists = [](const std::vector<ArcSet>& sets) {
    Json out = Json::array();
    for (ArcSet s : sets) {
      Json one = Json::array();
      for (int e : s) one.push_back(e);
      out.push_back(std::move(one));
    }
    return out;
  };
  if (in.forests) j["forests"] = arc_lists(*in.forests);
  if (in.branchings) j["branchings"] = arc_lists(*in.branchings);
  if (in.partition) {
    Json parts = Json::array();
    for (IndexSet p : *in.partition) {
      Json one = Json::array();
      for (int i : p) one.push_back(i);
      parts.push_back(std::move(one));
    }
    j["partition"] = std::move(parts);
  }
  if (in.lower) j["lower"] = *in.lower;
  if (in.upper) j["upper"] = *in.upper;
  if (!in.mode.empty()) j["mode"] = in.mode;
  if (in.k) j["k"] = *in.k;
  if (in.rootsets) {
    Json rs = Json::array();
    for (VertexSet r : *in.rootsets) rs.push_back(in.set_names(r));
    j["rootsets"] = std::move(rs);
  }
  if (in.u_sets) {
    Json us = Json::array();
    for (VertexSet r : *in.u_sets) us.push_back(in.set_names(r));
    j["U"] = std::move(us);
  }
  if (in.c_list) j["c"] = *in.c_list;
  if (in.c_scalar) j["c"] = *in.c_scalar;
  if (in.c_prime) j["c_prime"] = *in.c_prime;
  auto vertex_table = [&](const std::vector<int>& t) {
    Json out = Json::object();
    for (int v = 0; v < in.vnames.size(); ++v) out[in.vnames.name(v)] = t[static_cast<std::size_t>(v)];
    return out;
  };
  if (in.f_per_vertex) j["f"] = vertex_table(*in.f_per_vertex);
  if (in.g_per_vertex) j["g"] = vertex_table(*in.g_per_vertex);
  if (in.bipartite) {
    const BipartiteSide& side = *in.bipartite;
    j["S"] = side.snames.names;
    j["T"] = side.tnames.names;
    Json e0 = Json::array();
    for (auto [s, t] : side.instance.edges0)
      e0.push_back(Json::array({side.snames.name(s), side.tnames.name(t)}));
    j["E0"] = std::move(e0);
    Json pt = Json::object();
    std::vector<std::pair<std::string, int>> entries;
    for (std::uint64_t m = 1; m < side.instance.p.size(); ++m) {
      if (side.instance.p[m] == 0) continue;
      std::vector<std::string> names;
      for (int t : TSet::of_bits(m)) names.push_back(side.tnames.name(t));
      entries.emplace_back(io_detail::subset_key(names), side.instance.p[m]);
    }
    std::sort(entries.begin(), entries.end());
    for (auto& [key, val] : entries) pt[key] = val;
    j["p_T"] = std::move(pt);
    Json g = Json::object();
    for (int t = 0; t < side.tnames.size(); ++t) g[side.tnames.name(t)] = side.instance.g[static_cast<std::size_t>(t)];
    j["g"] = std::move(g);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Result files.
// ---------------------------------------------------------------------------

inline Json step_log_json(const std::vector<StepAction>& log) {
  Json out = Json::array();
  for (const StepAction& s : log) {
    Json one = Json::object();
    switch (s.kind) {
      case StepAction::Kind::add_root_arc:
        one["action"] = "add_root_arc";
        one["forest"] = s.forest;
        one["arc"] = s.arc;
        break;
      case StepAction::Kind::add_internal_arc:
        one["action"] = "add_internal_arc";
        one["forest"] = s.forest;
        one["arc"] = s.arc;
        break;
      case StepAction::Kind::decrement_upper:
        one["action"] = "decrement_upper";
        one["part"] = s.part;
        break;
    }
    out.push_back(std::move(one));
  }
  return out;
}

inline std::vector<StepAction> parse_step_log(const Json& j) {
  std::vector<StepAction> log;
  for (const Json& one : j) {
    StepAction s;
    std::string action = io_detail::field(one, "action").get<std::string>();
    if (action == "add_root_arc" || action == "add_internal_arc") {
      s.kind = action == "add_root_arc" ? StepAction::Kind::add_root_arc
                                        : StepAction::Kind::add_internal_arc;
      s.forest = io_detail::field(one, "forest").get<int>();
      s.arc = io_detail::field(one, "arc").get<int>();
    } else if (action == "decrement_upper") {
      s.kind = StepAction::Kind::decrement_upper;
      s.part = io_detail::field(one, "part").get<int>();
    } else {
      throw InputError("unknown step action: " + action);
    }
    log.push_back(s);
  }
  return log;
}

inline Json certificate_json(const Instance& in, const ViolationCertificate& c) {
  Json j = Json::object();
  Json family = Json::array();
  for (VertexSet x : c.family) family.push_back(in.set_names(x));
  j["family"] = std::move(family);
  Json iu = Json::array();
  for (int i : c.index_union) iu.push_back(i);
  j["I"] = std::move(iu);
  j["condition"] = c.condition;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  return j;
}

inline ViolationCertificate parse_certificate(const Instance& in, const Json& j) {
  ViolationCertificate c;
  for (const Json& f : io_detail::field(j, "family"))
    c.family.push_back(in.name_set(f.get<std::vector<std::string>>()));
  for (const Json& i : io_detail::field(j, "I")) c.index_union = c.index_union.with(i.get<int>());
  c.condition = io_detail::field(j, "condition").get<std::string>();
  c.lhs = io_detail::field(j, "lhs").get<long long>();
  c.rhs = io_detail::field(j, "rhs").get<long long>();
  return c;
}

// Stable on-disk form: two-space indent, fixed key order, trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace arbor
