//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/indexed_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "treelat/kernels.hpp"

namespace treelat {

namespace {

void build_csr(std::size_t n, const std::vector<Edge> &edges, bool by_terminus,
               std::vector<std::uint32_t> &offsets, std::vector<EdgeId> &out) {
  offsets.assign(n + 1, 0);
  for (const auto &e : edges) {
    VertexId v = by_terminus ? e.terminus : e.origin;
    if (v < n)
      ++offsets[v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  out.assign(offsets.back(), 0);
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (EdgeId e = 0; e < edges.size(); ++e) {
    VertexId v = by_terminus ? edges[e].terminus : edges[e].origin;
    if (v < n)
      out[fill[v]++] = e;
  }
}

} // namespace

EdgeIndexedGraph::EdgeIndexedGraph(std::vector<Vertex> vertices,
                                   std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  build_csr(vertices_.size(), edges_, true, in_offsets_, in_edges_);
  build_csr(vertices_.size(), edges_, false, out_offsets_, out_edges_);
  for (VertexId v = 0; v < vertices_.size(); ++v)
    vertex_lookup_.emplace(vertices_[v].id, v);
  for (EdgeId e = 0; e < edges_.size(); ++e)
    edge_lookup_.emplace(edges_[e].id, e);
}

std::span<const EdgeId> EdgeIndexedGraph::incoming(VertexId v) const {
  return {in_edges_.data() + in_offsets_[v],
          in_edges_.data() + in_offsets_[v + 1]};
}

std::span<const EdgeId> EdgeIndexedGraph::outgoing(VertexId v) const {
  return {out_edges_.data() + out_offsets_[v],
          out_edges_.data() + out_offsets_[v + 1]};
}

std::optional<VertexId>
EdgeIndexedGraph::find_vertex(const std::string &id) const {
  if (auto it = vertex_lookup_.find(id); it != vertex_lookup_.end())
    return it->second;
  return std::nullopt;
}

std::optional<EdgeId> EdgeIndexedGraph::find_edge(const std::string &id) const {
  if (auto it = edge_lookup_.find(id); it != edge_lookup_.end())
    return it->second;
  return std::nullopt;
}

VertexId EdgeIndexedGraph::vertex_by_id(const std::string &id) const {
  if (auto v = find_vertex(id))
    return *v;
  throw precondition_error("UnknownVertex", "no vertex with id '" + id + "'");
}

std::int64_t EdgeIndexedGraph::lifted_degree(VertexId v) const {
  std::int64_t sum = 0;
  for (EdgeId e : incoming(v))
    sum += edges_[e].index;
  return sum;
}

bool EdgeIndexedGraph::has_parts() const {
  return !vertices_.empty() &&
         std::all_of(vertices_.begin(), vertices_.end(),
                     [](const Vertex &v) { return v.part != Part::none; });
}

VertexId GraphBuilder::add_vertex(std::string id, Part part, bool frontier) {
  vertices_.push_back({std::move(id), part, frontier});
  return static_cast<VertexId>(vertices_.size() - 1);
}

EdgeId GraphBuilder::add_edge_pair(VertexId u, VertexId v,
                                   std::int64_t index_at_v,
                                   std::int64_t index_at_u) {
  auto e = static_cast<EdgeId>(edges_.size());
  edges_.push_back({"e" + std::to_string(e), u, v, e + 1, index_at_v});
  edges_.push_back({"e" + std::to_string(e + 1), v, u, e, index_at_u});
  return e;
}

EdgeIndexedGraph GraphBuilder::build() && {
  return EdgeIndexedGraph(std::move(vertices_), std::move(edges_));
}

std::vector<std::string> validate(const EdgeIndexedGraph &graph) {
  std::vector<std::string> out;
  const auto nv = graph.vertex_count();
  const auto ne = graph.edge_count();
  {
    std::unordered_map<std::string, int> seen;
    for (const auto &v : graph.vertices())
      if (++seen[v.id] == 2)
        out.push_back("duplicate vertex id '" + v.id + "'");
    seen.clear();
    for (const auto &e : graph.edges())
      if (++seen[e.id] == 2)
        out.push_back("duplicate edge id '" + e.id + "'");
  }
  for (EdgeId e = 0; e < ne; ++e) {
    const Edge &edge = graph.edge(e);
    const std::string name = "edge '" + edge.id + "'";
    if (edge.origin >= nv || edge.terminus >= nv) {
      out.push_back(name + ": endpoint out of range");
      continue;
    }
    if (edge.index < 1)
      out.push_back(name + ": index must be >= 1 (got " +
                    std::to_string(edge.index) + ")");
    if (edge.reverse >= ne) {
      out.push_back(name + ": reverse out of range");
      continue;
    }
    if (edge.reverse == e) {
      out.push_back(name + ": involution has fixed point");
      continue;
    }
    const Edge &rev = graph.edge(edge.reverse);
    if (rev.reverse != e)
      out.push_back(name + ": reverse is not an involution");
    if (rev.origin != edge.terminus || rev.terminus != edge.origin)
      out.push_back(name + ": origin/terminus do not match reverse");
    const Part po = graph.vertex(edge.origin).part;
    const Part pt = graph.vertex(edge.terminus).part;
    if (po != Part::none && pt != Part::none && po == pt)
      out.push_back(name + ": joins two vertices of the same part");
  }
  if (graph.has_parts() == false) {
    bool any = std::any_of(graph.vertices().begin(), graph.vertices().end(),
                           [](const Vertex &v) { return v.part != Part::none; });
    if (any)
      out.push_back("bipartition tags present on some vertices only");
  }
  return out;
}

bool Ordering::is_integral() const {
  auto integral = [](const Rational &r) { return treelat::is_integral(r); };
  return std::all_of(vertex_.begin(), vertex_.end(), integral) &&
         std::all_of(edge_.begin(), edge_.end(), integral);
}

Ordering Ordering::scaled(const Rational &factor) const {
  Ordering out = *this;
  for (auto &v : out.vertex_) {
    v *= factor;
    v.canonicalize();
  }
  for (auto &e : out.edge_) {
    e *= factor;
    e.canonicalize();
  }
  return out;
}

std::vector<std::string> ordering_violations(const EdgeIndexedGraph &graph,
                                             const Ordering &ordering) {
  std::vector<std::string> out;
  if (ordering.vertex_values().size() != graph.vertex_count() ||
      ordering.edge_values().size() != graph.edge_count()) {
    out.push_back("ordering size does not match graph");
    return out;
  }
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    if (ordering.vertex(v) <= 0)
      out.push_back("vertex '" + graph.vertex(v).id + "': value not positive");
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge &edge = graph.edge(e);
    if (ordering.edge(e) != ordering.edge(edge.reverse))
      out.push_back("edge '" + edge.id + "': N(e) != N(reverse e)");
    if (ordering.edge(e) * edge.index != ordering.vertex(edge.terminus))
      out.push_back("edge '" + edge.id + "': N(e) != N(terminus)/i(e)");
  }
  return out;
}

Ordering compute_ordering(const EdgeIndexedGraph &graph, VertexId base,
                          const Rational &base_value) {
  if (base_value <= 0)
    throw precondition_error("NonPositiveBase", "base value must be positive");
  if (base >= graph.vertex_count())
    throw precondition_error("UnknownVertex", "base vertex out of range");
  std::vector<Rational> value(graph.vertex_count());
  std::vector<char> seen(graph.vertex_count(), 0);
  std::deque<VertexId> queue{base};
  value[base] = base_value;
  value[base].canonicalize();
  seen[base] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : graph.outgoing(v)) {
      const Edge &edge = graph.edge(e);
      // N(terminus)/i(e) = N(origin)/i(reverse e)
      Rational next = value[v] * edge.index /
                      Rational(graph.edge(edge.reverse).index);
      next.canonicalize();
      if (!seen[edge.terminus]) {
        seen[edge.terminus] = 1;
        value[edge.terminus] = next;
        queue.push_back(edge.terminus);
      } else if (value[edge.terminus] != next) {
        throw invariant_error(
            "NonUnimodular",
            "cycle through edge '" + edge.id + "' forces N('" +
                graph.vertex(edge.terminus).id + "') to be both " +
                to_string(value[edge.terminus]) + " and " + to_string(next));
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw precondition_error("Disconnected", "graph is not connected");
  std::vector<Rational> edge_value(graph.edge_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge &edge = graph.edge(e);
    edge_value[e] = value[edge.terminus] / Rational(edge.index);
    edge_value[e].canonicalize();
  }
  return Ordering(std::move(value), std::move(edge_value));
}

bool is_unimodular(const EdgeIndexedGraph &graph) {
  if (graph.vertex_count() == 0)
    return true;
  try {
    compute_ordering(graph, 0, 1);
    return true;
  } catch (const Error &err) {
    if (err.name() == "NonUnimodular")
      return false;
    throw;
  }
}

Ordering minimal_integral_ordering(const Ordering &ordering) {
  // Scale by lcm(denominators) / gcd(numerators).
  Integer den_lcm = 1, num_gcd = 0;
  auto absorb = [&](const Rational &r) {
    Rational c = r;
    c.canonicalize();
    den_lcm = lcm(den_lcm, c.get_den());
    num_gcd = gcd(num_gcd, c.get_num());
  };
  for (const auto &v : ordering.vertex_values())
    absorb(v);
  for (const auto &e : ordering.edge_values())
    absorb(e);
  if (num_gcd == 0)
    return ordering;
  // After multiplying by den_lcm every value is integral; the gcd of the
  // resulting integers is gcd(numerators) * den_lcm / lcm(den) = num_gcd.
  return ordering.scaled(make_rational(den_lcm, num_gcd));
}

std::vector<std::uint32_t> CoverBall::degrees() const {
  std::vector<std::uint32_t> deg(nodes.size(), 0);
  for (std::uint32_t i = 1; i < nodes.size(); ++i) {
    ++deg[i];
    ++deg[nodes[i].parent];
  }
  return deg;
}

std::vector<std::pair<std::string, std::uint32_t>>
CoverBall::label(const EdgeIndexedGraph &graph, std::uint32_t node) const {
  std::vector<std::pair<std::string, std::uint32_t>> path;
  while (node != 0) {
    path.emplace_back(graph.edge(nodes[node].edge).id, nodes[node].copy);
    node = nodes[node].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

CoverBall universal_cover_ball(const EdgeIndexedGraph &graph, VertexId base,
                               std::uint32_t radius) {
  if (base >= graph.vertex_count())
    throw precondition_error("UnknownVertex", "base vertex out of range");
  return kernels::cover_ball_parallel(graph, base, radius);
}

std::vector<std::string> biregularity_violations(const EdgeIndexedGraph &graph,
                                                 std::int64_t m,
                                                 std::int64_t n) {
  std::vector<std::string> out;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const Vertex &vx = graph.vertex(v);
    if (vx.frontier)
      continue;
    if (vx.part == Part::none) {
      out.push_back("vertex '" + vx.id + "' has no bipartition tag");
      continue;
    }
    const std::int64_t want = vx.part == Part::v0 ? m : n;
    const std::int64_t got = graph.lifted_degree(v);
    if (got != want)
      out.push_back("vertex '" + vx.id + "': lifted degree " +
                    std::to_string(got) + ", expected " +
                    std::to_string(want));
  }
  return out;
}

bool covers_biregular(const EdgeIndexedGraph &graph, std::int64_t m,
                      std::int64_t n) {
  return biregularity_violations(graph, m, n).empty();
}

std::vector<std::uint32_t> edge_distances(const EdgeIndexedGraph &graph,
                                          VertexId base) {
  std::vector<std::uint32_t> dist(graph.vertex_count(), kNone);
  if (base >= graph.vertex_count())
    return dist;
  std::deque<VertexId> queue{base};
  dist[base] = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : graph.outgoing(v)) {
      VertexId u = graph.edge(e).terminus;
      if (dist[u] == kNone) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

bool is_connected(const EdgeIndexedGraph &graph) {
  if (graph.vertex_count() == 0)
    return true;
  auto dist = edge_distances(graph, 0);
  return std::find(dist.begin(), dist.end(), kNone) == dist.end();
}

bool is_tree(const EdgeIndexedGraph &graph) {
  return is_connected(graph) &&
         graph.edge_count() / 2 + 1 == graph.vertex_count();
}

std::string to_string(Part part) {
  switch (part) {
  case Part::v0:
    return "V0";
  case Part::v1:
    return "V1";
  default:
    return "";
  }
}

} // namespace treelat
