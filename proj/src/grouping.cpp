//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/grouping.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace treelat {

Ordering FiniteGrouping::order_function() const {
  std::vector<Rational> v, e;
  v.reserve(vertex_groups.size());
  e.reserve(edge_groups.size());
  for (const auto &g : vertex_groups)
    v.emplace_back(g.order());
  for (const auto &g : edge_groups)
    e.emplace_back(g.order());
  return Ordering(std::move(v), std::move(e));
}

std::vector<std::string> grouping_violations(const FiniteGrouping &grouping,
                                             std::uint64_t bound) {
  std::vector<std::string> out;
  const auto &graph = grouping.graph;
  if (grouping.vertex_groups.size() != graph.vertex_count() ||
      grouping.edge_groups.size() != graph.edge_count() ||
      grouping.injections.size() != graph.edge_count()) {
    out.push_back("group assignment does not cover the graph");
    return out;
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge &edge = graph.edge(e);
    const auto &ge = grouping.edge_groups[e];
    const auto &gr = grouping.edge_groups[edge.reverse];
    const auto &gv = grouping.vertex_groups[edge.terminus];
    const std::string name = "edge '" + edge.id + "'";
    if (ge.describe() != gr.describe() || ge.order() != gr.order())
      out.push_back(name + ": A_e differs from A_{reverse e}");
    if (gv.order() != ge.order() * Integer(static_cast<long>(edge.index)))
      out.push_back(name + ": |A_terminus| / |A_e| != i(e)");
    for (auto &msg : check_injection(grouping.injections[e], ge, gv, bound))
      out.push_back(name + ": " + msg);
  }
  for (auto &msg : ordering_violations(graph, grouping.order_function()))
    out.push_back("order function: " + msg);
  return out;
}

FiniteGrouping canonical_cyclic_grouping(const EdgeIndexedGraph &graph,
                                         const Ordering &ordering) {
  if (!ordering.is_integral())
    throw precondition_error("NonIntegralOrdering",
                             "cyclic grouping needs an integral ordering");
  FiniteGrouping g{graph, {}, {}, {}};
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    g.vertex_groups.push_back(GroupDesc::cyclic(ordering.vertex(v).get_num()));
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    g.edge_groups.push_back(GroupDesc::cyclic(ordering.edge(e).get_num()));
    g.injections.push_back({Injection::Kind::cyclic_multiply,
                            static_cast<std::uint64_t>(graph.edge(e).index)});
  }
  return g;
}

bool is_effective_cyclic(const Ordering &ordering) {
  if (!ordering.is_integral())
    throw precondition_error("NonIntegralOrdering",
                             "effectiveness is defined for integral orderings");
  Integer g = 0;
  for (const auto &v : ordering.vertex_values())
    g = gcd(g, v.get_num());
  for (const auto &e : ordering.edge_values())
    g = gcd(g, e.get_num());
  return g == 1;
}

Selector Selector::parse(const std::string &name) {
  Selector s;
  if (name == "v0" || name == "V0")
    s.kind = Kind::v0;
  else if (name == "v1" || name == "V1")
    s.kind = Kind::v1;
  else if (name == "all" || name == "V")
    s.kind = Kind::all;
  else
    throw parse_error("unknown selector '" + name + "' (v0|v1|all)");
  return s;
}

std::string Selector::name() const {
  switch (kind) {
  case Kind::v0:
    return "v0";
  case Kind::v1:
    return "v1";
  case Kind::all:
    return "all";
  case Kind::explicit_set:
    return "explicit";
  }
  return "";
}

bool Selector::selects(const EdgeIndexedGraph &graph, VertexId v) const {
  switch (kind) {
  case Kind::v0:
    return graph.vertex(v).part == Part::v0;
  case Kind::v1:
    return graph.vertex(v).part == Part::v1;
  case Kind::all:
    return true;
  case Kind::explicit_set:
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }
  return false;
}

namespace {

template <typename OrderOf>
Rational selected_sum(const EdgeIndexedGraph &graph, const Selector &selector,
                      OrderOf order_of) {
  Rational sum = 0;
  bool any = false;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (!selector.selects(graph, v))
      continue;
    any = true;
    sum += 1 / Rational(order_of(v));
  }
  if (!any)
    throw precondition_error("EmptySelector",
                             "selector '" + selector.name() +
                                 "' selects no vertices");
  sum.canonicalize();
  return sum;
}

} // namespace

Rational covolume(const FiniteGrouping &grouping, const Selector &selector) {
  return selected_sum(grouping.graph, selector, [&](VertexId v) {
    return Rational(grouping.vertex_groups[v].order());
  });
}

Rational covolume(const EdgeIndexedGraph &graph, const Ordering &ordering,
                  const Selector &selector) {
  return selected_sum(graph, selector,
                      [&](VertexId v) { return ordering.vertex(v); });
}

std::vector<std::string> verify_cover(const CoverMap &cover) {
  std::vector<std::string> out;
  const auto &B = cover.source;
  const auto &A = cover.target;
  if (cover.vertex_map.size() != B.vertex_count() ||
      cover.vertex_index.size() != B.vertex_count()) {
    out.push_back("vertex map or vertex index data missing");
    return out;
  }
  if (cover.edge_map.size() != B.edge_count() ||
      cover.edge_index.size() != B.edge_count()) {
    out.push_back("edge map or edge index data missing");
    return out;
  }
  bool maps_ok = true;
  for (VertexId b = 0; b < B.vertex_count(); ++b) {
    if (cover.vertex_map[b] >= A.vertex_count()) {
      out.push_back("vertex '" + B.vertex(b).id + "' maps outside the target");
      maps_ok = false;
    }
    if (cover.vertex_index[b] < 1)
      out.push_back("vertex '" + B.vertex(b).id +
                    "': missing local index [A_a : B_b]");
  }
  for (EdgeId f = 0; f < B.edge_count(); ++f) {
    if (cover.edge_map[f] >= A.edge_count()) {
      out.push_back("edge '" + B.edge(f).id + "' maps outside the target");
      maps_ok = false;
    }
    if (cover.edge_index[f] < 1)
      out.push_back("edge '" + B.edge(f).id +
                    "': missing local index [A_e : B_f]");
  }
  if (!maps_ok)
    return out;
  for (EdgeId f = 0; f < B.edge_count(); ++f) {
    const Edge &ef = B.edge(f);
    const Edge &ee = A.edge(cover.edge_map[f]);
    const std::string name = "edge '" + ef.id + "'";
    if (cover.vertex_map[ef.origin] != ee.origin ||
        cover.vertex_map[ef.terminus] != ee.terminus)
      out.push_back(name + ": graph map does not commute with origin/terminus");
    if (cover.edge_map[ef.reverse] != ee.reverse)
      out.push_back(name + ": graph map does not commute with reverse");
    if (cover.edge_index[f] != cover.edge_index[ef.reverse])
      out.push_back(name + ": local edge index differs on the reverse edge");
  }
  if (!out.empty())
    return out;
  for (VertexId b = 0; b < B.vertex_count(); ++b) {
    const VertexId a = cover.vertex_map[b];
    std::map<EdgeId, std::pair<std::int64_t, std::int64_t>> fiber;
    for (EdgeId f : B.incoming(b)) {
      auto &slot = fiber[cover.edge_map[f]];
      slot.first += B.edge(f).index;
      slot.second += cover.edge_index[f];
    }
    for (EdgeId e : A.incoming(a)) {
      auto [sum_j, sum_idx] = fiber[e];
      if (sum_j != A.edge(e).index)
        out.push_back("index sum at b='" + B.vertex(b).id + "', e='" +
                      A.edge(e).id + "': i(e)=" +
                      std::to_string(A.edge(e).index) + " but sum j(f)=" +
                      std::to_string(sum_j));
      if (sum_idx != cover.vertex_index[b])
        out.push_back("local index at b='" + B.vertex(b).id + "', e='" +
                      A.edge(e).id + "': [A_a:B_b]=" +
                      std::to_string(cover.vertex_index[b]) +
                      " but sum [A_e:B_f]=" + std::to_string(sum_idx));
    }
  }
  return out;
}

std::vector<std::int64_t> cover_degrees(const CoverMap &cover) {
  std::vector<std::int64_t> deg(cover.target.vertex_count(), 0);
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b)
    deg.at(cover.vertex_map[b]) += cover.vertex_index[b];
  return deg;
}

std::int64_t cover_degree(const CoverMap &cover) {
  auto deg = cover_degrees(cover);
  if (deg.empty())
    throw precondition_error("EmptyCover", "target graph has no vertices");
  for (VertexId a = 0; a < deg.size(); ++a)
    if (deg[a] != deg[0])
      throw invariant_error(
          "DegreeMismatch",
          "degree " + std::to_string(deg[a]) + " at '" +
              cover.target.vertex(a).id + "' but " + std::to_string(deg[0]) +
              " at '" + cover.target.vertex(0).id + "'");
  return deg[0];
}

bool volume_ratio_check(const CoverMap &cover, const FiniteGrouping &base,
                        const FiniteGrouping &cover_grouping) {
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b) {
    Integer big = base.vertex_groups.at(cover.vertex_map[b]).order();
    Integer small = cover_grouping.vertex_groups.at(b).order();
    if (big != small * cover.vertex_index[b])
      return false;
  }
  const Selector all{Selector::Kind::all, {}};
  Rational lhs = Rational(cover_degree(cover)) * covolume(base, all);
  return lhs == covolume(cover_grouping, all);
}

namespace {

CoverMap identity_cover(const EdgeIndexedGraph &base, std::int64_t d) {
  CoverMap c{base, base, {}, {}, {}, {}};
  for (VertexId v = 0; v < base.vertex_count(); ++v) {
    c.vertex_map.push_back(v);
    c.vertex_index.push_back(d);
  }
  for (EdgeId e = 0; e < base.edge_count(); ++e) {
    c.edge_map.push_back(e);
    c.edge_index.push_back(d);
  }
  return c;
}

} // namespace

CoverMap build_index_cover(const EdgeIndexedGraph &base, std::int64_t d,
                           CoverMode mode) {
  if (d < 1)
    throw precondition_error("InvalidDegree", "cover degree must be >= 1");
  if (mode == CoverMode::group || d == 1)
    return identity_cover(base, mode == CoverMode::group ? d : 1);
  if (!is_connected(base))
    throw precondition_error("Disconnected", "base graph is not connected");
  // Breadth-first spanning tree; the first edge pair outside it is unwound.
  std::vector<char> in_tree(base.edge_count(), 0);
  std::vector<char> seen(base.vertex_count(), 0);
  std::deque<VertexId> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : base.outgoing(v)) {
      VertexId u = base.edge(e).terminus;
      if (!seen[u]) {
        seen[u] = 1;
        in_tree[e] = in_tree[base.edge(e).reverse] = 1;
        queue.push_back(u);
      }
    }
  }
  EdgeId twist = kNone;
  for (EdgeId e = 0; e < base.edge_count(); ++e)
    if (!in_tree[e] && base.edge(e).reverse > e) {
      twist = e;
      break;
    }
  if (twist == kNone)
    throw precondition_error("NoTopologicalCover",
                             "a tree has no connected cover of degree " +
                                 std::to_string(d));
  const auto nv = static_cast<VertexId>(base.vertex_count());
  const auto copies = static_cast<VertexId>(d);
  std::vector<Vertex> vertices;
  CoverMap cover;
  for (VertexId c = 0; c < copies; ++c)
    for (VertexId v = 0; v < nv; ++v) {
      Vertex vx = base.vertex(v);
      vx.id += "#" + std::to_string(c);
      vertices.push_back(std::move(vx));
      cover.vertex_map.push_back(v);
      cover.vertex_index.push_back(1);
    }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < base.edge_count(); ++e) {
    const Edge &edge = base.edge(e);
    if (edge.reverse < e)
      continue;
    for (VertexId c = 0; c < copies; ++c) {
      VertexId shifted = e == twist ? (c + 1) % copies : c;
      auto f = static_cast<EdgeId>(edges.size());
      edges.push_back({edge.id + "#" + std::to_string(c), c * nv + edge.origin,
                       shifted * nv + edge.terminus, f + 1, edge.index});
      const Edge &rev = base.edge(edge.reverse);
      edges.push_back({rev.id + "#" + std::to_string(c),
                       shifted * nv + edge.terminus, c * nv + edge.origin, f,
                       rev.index});
      cover.edge_map.push_back(e);
      cover.edge_map.push_back(edge.reverse);
      cover.edge_index.push_back(1);
      cover.edge_index.push_back(1);
    }
  }
  cover.source = EdgeIndexedGraph(std::move(vertices), std::move(edges));
  cover.target = base;
  return cover;
}

std::pair<Ordering, Ordering> cover_orderings(const CoverMap &cover) {
  Ordering base =
      minimal_integral_ordering(compute_ordering(cover.target, 0, 1));
  Integer scale = 1;
  auto absorb = [&](const Rational &value, std::int64_t index) {
    Integer need = Integer(index) / gcd(value.get_num(), Integer(index));
    scale = lcm(scale, need);
  };
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b)
    absorb(base.vertex(cover.vertex_map[b]), cover.vertex_index[b]);
  for (EdgeId f = 0; f < cover.source.edge_count(); ++f)
    absorb(base.edge(cover.edge_map[f]), cover.edge_index[f]);
  base = base.scaled(Rational(scale));
  std::vector<Rational> vb, eb;
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b)
    vb.push_back(base.vertex(cover.vertex_map[b]) / cover.vertex_index[b]);
  for (EdgeId f = 0; f < cover.source.edge_count(); ++f)
    eb.push_back(base.edge(cover.edge_map[f]) / cover.edge_index[f]);
  for (auto &x : vb)
    x.canonicalize();
  for (auto &x : eb)
    x.canonicalize();
  return {base, Ordering(std::move(vb), std::move(eb))};
}

EdgeIndexedGraph random_unimodular_graph(std::mt19937_64 &rng,
                                         std::uint32_t max_vertices,
                                         bool allow_cycles) {
  static const std::int64_t orders[] = {1, 2, 3, 4, 6, 8, 12, 24};
  std::uniform_int_distribution<std::uint32_t> count(1, max_vertices);
  const std::uint32_t nv = count(rng);
  std::vector<std::int64_t> order(nv);
  for (auto &o : order)
    o = orders[std::uniform_int_distribution<int>(0, 7)(rng)];
  GraphBuilder builder;
  for (std::uint32_t v = 0; v < nv; ++v)
    builder.add_vertex("v" + std::to_string(v));
  auto connect = [&](VertexId u, VertexId v) {
    std::int64_t g = std::gcd(order[u], order[v]);
    std::vector<std::int64_t> divisors;
    for (std::int64_t x = 1; x <= g; ++x)
      if (g % x == 0)
        divisors.push_back(x);
    std::int64_t ne = divisors[std::uniform_int_distribution<std::size_t>(
        0, divisors.size() - 1)(rng)];
    builder.add_edge_pair(u, v, order[v] / ne, order[u] / ne);
  };
  for (std::uint32_t v = 1; v < nv; ++v)
    connect(std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng), v);
  if (allow_cycles) {
    std::uint32_t extra = std::uniform_int_distribution<std::uint32_t>(
        1, std::max<std::uint32_t>(1, nv))(rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, nv - 1);
    for (std::uint32_t i = 0; i < extra; ++i) {
      VertexId u = pick(rng), v = pick(rng);
      connect(u, v);
    }
  }
  return std::move(builder).build();
}

namespace {

Json group_to_json(const GroupDesc &g) {
  switch (g.kind) {
  case GroupDesc::Kind::cyclic:
    return {{"kind", "cyclic"}, {"order", g.orders[0].get_str()}};
  case GroupDesc::Kind::product:
    return {{"kind", "product"},
            {"orders", {g.orders[0].get_str(), g.orders[1].get_str()}}};
  case GroupDesc::Kind::semidirect: {
    const auto &s = g.tower->weights().sequence();
    return {{"kind", "semidirect"},
            {"n", s.n()},
            {"s_prefix", s.prefix()},
            {"s_period", s.period()},
            {"k", g.tower->k()},
            {"level", g.level},
            {"extra", g.extra},
            {"units_modulus", g.tower->modulus()},
            {"order", g.order().get_str()}};
  }
  }
  return {};
}

} // namespace

Json grouping_to_json(const FiniteGrouping &grouping, std::uint64_t bound) {
  const auto &graph = grouping.graph;
  Json vg = Json::object(), eg = Json::object(), inj = Json::object();
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    vg[graph.vertex(v).id] = group_to_json(grouping.vertex_groups[v]);
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const auto &from = grouping.edge_groups[e];
    const auto &to = grouping.vertex_groups[graph.edge(e).terminus];
    eg[graph.edge(e).id] = group_to_json(from);
    Json ji{{"kind", grouping.injections[e].describe()}};
    if (from.order() <= Integer(static_cast<unsigned long>(bound))) {
      Json images = Json::array();
      for (const auto &gen : generators(from))
        images.push_back(
            {{"generator", gen},
             {"image", apply(grouping.injections[e], from, to, gen)}});
      ji["generator_images"] = std::move(images);
    }
    inj[graph.edge(e).id] = std::move(ji);
  }
  return {{"graph", graph_to_json(graph)},
          {"vertex_groups", std::move(vg)},
          {"edge_groups", std::move(eg)},
          {"injections", std::move(inj)}};
}

Json cover_to_json(const CoverMap &cover) {
  Json vm = Json::object(), em = Json::object(), vi = Json::object(),
       ei = Json::object();
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b) {
    const auto &id = cover.source.vertex(b).id;
    vm[id] = cover.target.vertex(cover.vertex_map[b]).id;
    vi[id] = cover.vertex_index[b];
  }
  for (EdgeId f = 0; f < cover.source.edge_count(); ++f) {
    const auto &id = cover.source.edge(f).id;
    em[id] = cover.target.edge(cover.edge_map[f]).id;
    ei[id] = cover.edge_index[f];
  }
  return {{"source", graph_to_json(cover.source)},
          {"target", graph_to_json(cover.target)},
          {"vertex_map", std::move(vm)},
          {"edge_map", std::move(em)},
          {"vertex_index", std::move(vi)},
          {"edge_index", std::move(ei)}};
}

CoverMap cover_from_json(const Json &doc, const EdgeIndexedGraph *source,
                         const EdgeIndexedGraph *target) {
  if (!doc.is_object())
    throw parse_error("cover document must be an object");
  CoverMap c;
  if (source)
    c.source = *source;
  else if (doc.contains("source"))
    c.source = graph_from_json(doc["source"]);
  else
    throw parse_error("cover needs a source graph");
  if (target)
    c.target = *target;
  else if (doc.contains("target"))
    c.target = graph_from_json(doc["target"]);
  else
    throw parse_error("cover needs a target graph");
  for (const char *key : {"vertex_map", "edge_map"})
    if (!doc.contains(key) || !doc[key].is_object())
      throw parse_error(std::string("cover needs '") + key + "'");
  const Json empty = Json::object();
  const Json &vi = doc.contains("vertex_index") ? doc["vertex_index"] : empty;
  const Json &ei = doc.contains("edge_index") ? doc["edge_index"] : empty;
  auto lookup_index = [](const Json &table, const std::string &id) {
    if (!table.contains(id))
      return std::int64_t{0}; // reported by verify_cover as missing
    if (!table[id].is_number_integer())
      throw parse_error("local index for '" + id + "' must be an integer");
    return table[id].get<std::int64_t>();
  };
  for (VertexId b = 0; b < c.source.vertex_count(); ++b) {
    const auto &id = c.source.vertex(b).id;
    if (!doc["vertex_map"].contains(id))
      throw parse_error("vertex_map misses '" + id + "'");
    auto target_id = doc["vertex_map"][id];
    if (!target_id.is_string())
      throw parse_error("vertex_map values must be strings");
    auto a = c.target.find_vertex(target_id.get<std::string>());
    if (!a)
      throw parse_error("vertex_map names unknown target vertex");
    c.vertex_map.push_back(*a);
    c.vertex_index.push_back(lookup_index(vi, id));
  }
  for (EdgeId f = 0; f < c.source.edge_count(); ++f) {
    const auto &id = c.source.edge(f).id;
    if (!doc["edge_map"].contains(id))
      throw parse_error("edge_map misses '" + id + "'");
    auto target_id = doc["edge_map"][id];
    if (!target_id.is_string())
      throw parse_error("edge_map values must be strings");
    auto e = c.target.find_edge(target_id.get<std::string>());
    if (!e)
      throw parse_error("edge_map names unknown target edge");
    c.edge_map.push_back(*e);
    c.edge_index.push_back(lookup_index(ei, id));
  }
  return c;
}

Integer p_part(const Integer &n, const Integer &p) {
  Integer out = 1, rest = n;
  if (rest == 0 || p < 2)
    return out;
  while (rest % p == 0) {
    rest /= p;
    out *= p;
  }
  return out;
}

} // namespace treelat
