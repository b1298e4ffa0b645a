//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace treelat {

namespace {

std::string id_string(const Json &j, const char *what) {
  if (j.is_string())
    return j.get<std::string>();
  if (j.is_number_integer())
    return std::to_string(j.get<long long>());
  throw parse_error(std::string(what) + " must be a string or integer");
}

Part parse_part(const Json &j) {
  if (j.is_null())
    return Part::none;
  if (!j.is_string())
    throw parse_error("part must be \"V0\", \"V1\" or null");
  auto s = j.get<std::string>();
  if (s == "V0" || s == "v0" || s == "0")
    return Part::v0;
  if (s == "V1" || s == "v1" || s == "1")
    return Part::v1;
  if (s.empty())
    return Part::none;
  throw parse_error("unknown part '" + s + "'");
}

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + "\"";
}

} // namespace

Json rational_to_json(const Rational &r) { return to_string(r); }

Rational rational_from_json(const Json &j) {
  if (j.is_number_integer())
    return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  throw parse_error("expected a rational as \"p/q\" or an integer");
}

Json graph_to_json(const EdgeIndexedGraph &graph) {
  Json vertices = Json::array();
  for (const auto &v : graph.vertices()) {
    Json jv{{"id", v.id}};
    jv["part"] = v.part == Part::none ? Json(nullptr) : Json(to_string(v.part));
    if (v.frontier)
      jv["frontier"] = true;
    vertices.push_back(std::move(jv));
  }
  Json edges = Json::array();
  for (const auto &e : graph.edges())
    edges.push_back({{"id", e.id},
                     {"origin", graph.vertex(e.origin).id},
                     {"terminus", graph.vertex(e.terminus).id},
                     {"index", e.index},
                     {"reverse", graph.edge(e.reverse).id}});
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

EdgeIndexedGraph graph_from_json(const Json &doc) {
  if (!doc.is_object() || !doc.contains("vertices") ||
      !doc["vertices"].is_array())
    throw parse_error("graph document needs a 'vertices' array");
  std::vector<Vertex> vertices;
  std::unordered_map<std::string, VertexId> vid;
  for (const auto &jv : doc["vertices"]) {
    if (!jv.is_object() || !jv.contains("id"))
      throw parse_error("vertex entries need an 'id'");
    Vertex v;
    v.id = id_string(jv["id"], "vertex id");
    v.part = jv.contains("part") ? parse_part(jv["part"]) : Part::none;
    v.frontier = jv.value("frontier", false);
    vid.emplace(v.id, static_cast<VertexId>(vertices.size()));
    vertices.push_back(std::move(v));
  }
  std::vector<Edge> edges;
  std::vector<std::string> reverse_names;
  std::unordered_map<std::string, EdgeId> eid;
  const Json empty = Json::array();
  const Json &jedges = doc.contains("edges") ? doc["edges"] : empty;
  if (!jedges.is_array())
    throw parse_error("'edges' must be an array");
  for (const auto &je : jedges) {
    for (const char *key : {"id", "origin", "terminus", "index", "reverse"})
      if (!je.contains(key))
        throw parse_error(std::string("edge entry missing '") + key + "'");
    Edge e;
    e.id = id_string(je["id"], "edge id");
    auto find_v = [&](const Json &j) {
      auto name = id_string(j, "edge endpoint");
      auto it = vid.find(name);
      if (it == vid.end())
        throw parse_error("edge '" + e.id + "' names unknown vertex '" +
                          name + "'");
      return it->second;
    };
    e.origin = find_v(je["origin"]);
    e.terminus = find_v(je["terminus"]);
    if (!je["index"].is_number_integer())
      throw parse_error("edge '" + e.id + "': index must be an integer");
    e.index = je["index"].get<std::int64_t>();
    reverse_names.push_back(id_string(je["reverse"], "reverse"));
    eid.emplace(e.id, static_cast<EdgeId>(edges.size()));
    edges.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto it = eid.find(reverse_names[i]);
    if (it == eid.end())
      throw parse_error("edge '" + edges[i].id + "' names unknown reverse '" +
                        reverse_names[i] + "'");
    edges[i].reverse = it->second;
  }
  EdgeIndexedGraph graph(std::move(vertices), std::move(edges));
  auto diagnostics = validate(graph);
  if (!diagnostics.empty()) {
    std::string joined;
    for (const auto &d : diagnostics)
      joined += (joined.empty() ? "" : "; ") + d;
    throw invariant_error("InvalidGraph", joined);
  }
  return graph;
}

Json ordering_to_json(const EdgeIndexedGraph &graph,
                      const Ordering &ordering) {
  Json jv = Json::object(), je = Json::object();
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    jv[graph.vertex(v).id] = rational_to_json(ordering.vertex(v));
  for (EdgeId e = 0; e < graph.edge_count(); ++e)
    je[graph.edge(e).id] = rational_to_json(ordering.edge(e));
  return {{"vertices", std::move(jv)}, {"edges", std::move(je)}};
}

Ordering ordering_from_json(const EdgeIndexedGraph &graph, const Json &doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw parse_error("ordering document needs 'vertices' and 'edges'");
  std::vector<Rational> vertex(graph.vertex_count()),
      edge(graph.edge_count());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const auto &id = graph.vertex(v).id;
    if (!doc["vertices"].contains(id))
      throw parse_error("ordering misses vertex '" + id + "'");
    vertex[v] = rational_from_json(doc["vertices"][id]);
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const auto &id = graph.edge(e).id;
    if (!doc["edges"].contains(id))
      throw parse_error("ordering misses edge '" + id + "'");
    edge[e] = rational_from_json(doc["edges"][id]);
  }
  return Ordering(std::move(vertex), std::move(edge));
}

std::string graph_to_dot(const EdgeIndexedGraph &graph,
                         const std::optional<Ordering> &ordering) {
  std::ostringstream os;
  os << "graph A {\n";
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const auto &vx = graph.vertex(v);
    std::string label =
        ordering ? to_string(ordering->vertex(v)) : vx.id;
    if (ordering) {
      Rational c = ordering->vertex(v);
      c.canonicalize();
      if (c.get_den() == 1)
        label = c.get_num().get_str();
    }
    os << "  " << quote(vx.id) << " [label=" << quote(label);
    if (vx.part == Part::v0)
      os << ", shape=circle";
    else if (vx.part == Part::v1)
      os << ", shape=point";
    if (vx.frontier)
      os << ", style=dashed";
    os << "];\n";
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge &edge = graph.edge(e);
    if (edge.reverse < e)
      continue;
    os << "  " << quote(graph.vertex(edge.origin).id) << " -- "
       << quote(graph.vertex(edge.terminus).id)
       << " [headlabel=" << quote(std::to_string(edge.index))
       << ", taillabel="
       << quote(std::to_string(graph.edge(edge.reverse).index)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw parse_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception &ex) {
    throw parse_error("'" + path + "': " + ex.what());
  }
}

} // namespace treelat
