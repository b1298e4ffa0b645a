//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_INDEXED_GRAPH_HPP
#define TREELAT_INDEXED_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treelat/rational.hpp"

namespace treelat {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr std::uint32_t kNone = 0xffffffffu;

/// Bipartition tag of a vertex.
enum class Part : std::uint8_t { none, v0, v1 };

struct Vertex {
  std::string id;
  Part part = Part::none;
  // Truncation boundary of a lazily expanded infinite graph. Local degree
  // conditions are not asserted at frontier vertices.
  bool frontier = false;
};

/// Oriented edge; `index` is i(e) = [A_{terminus} : alpha_e A_e].
struct Edge {
  std::string id;
  VertexId origin = 0;
  VertexId terminus = 0;
  EdgeId reverse = 0;
  std::int64_t index = 1;
};

/// A locally finite edge-indexed graph (A, i). Oriented edges come in pairs
/// linked by `reverse`. The object is immutable once built; construction
/// does not validate, use `validate` for that.
class EdgeIndexedGraph {
public:
  EdgeIndexedGraph() = default;
  EdgeIndexedGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Vertex &vertex(VertexId v) const { return vertices_[v]; }
  const Edge &edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Vertex> &vertices() const { return vertices_; }
  const std::vector<Edge> &edges() const { return edges_; }

  /// Edges with terminus v, in increasing edge order.
  std::span<const EdgeId> incoming(VertexId v) const;
  /// Edges with origin v, in increasing edge order.
  std::span<const EdgeId> outgoing(VertexId v) const;

  std::optional<VertexId> find_vertex(const std::string &id) const;
  std::optional<EdgeId> find_edge(const std::string &id) const;
  VertexId vertex_by_id(const std::string &id) const;

  /// Sum of i(e) over edges e with terminus v: the degree of every lift of v.
  std::int64_t lifted_degree(VertexId v) const;
  bool has_parts() const;

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> in_offsets_, out_offsets_;
  std::vector<EdgeId> in_edges_, out_edges_;
  std::unordered_map<std::string, VertexId> vertex_lookup_;
  std::unordered_map<std::string, EdgeId> edge_lookup_;
};

/// Incremental construction with generated identifiers.
class GraphBuilder {
public:
  VertexId add_vertex(std::string id, Part part = Part::none,
                      bool frontier = false);
  /// Adds e: u -> v and its reverse. `index_at_v` is i(e), `index_at_u` is
  /// i(reverse e). Returns e.
  EdgeId add_edge_pair(VertexId u, VertexId v, std::int64_t index_at_v,
                       std::int64_t index_at_u);
  void set_index(EdgeId e, std::int64_t index) { edges_[e].index = index; }
  void set_frontier(VertexId v, bool frontier) {
    vertices_[v].frontier = frontier;
  }
  std::size_t vertex_count() const { return vertices_.size(); }
  EdgeIndexedGraph build() &&;

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

/// Structural invariant breaches; empty means valid.
std::vector<std::string> validate(const EdgeIndexedGraph &graph);

/// Positive rational N on vertices and oriented edges with
/// N(e) = N(reverse e) = N(terminus e) / i(e).
class Ordering {
public:
  Ordering() = default;
  Ordering(std::vector<Rational> vertex_values,
           std::vector<Rational> edge_values)
      : vertex_(std::move(vertex_values)), edge_(std::move(edge_values)) {}

  const Rational &vertex(VertexId v) const { return vertex_[v]; }
  const Rational &edge(EdgeId e) const { return edge_[e]; }
  const std::vector<Rational> &vertex_values() const { return vertex_; }
  const std::vector<Rational> &edge_values() const { return edge_; }

  bool is_integral() const;
  Ordering scaled(const Rational &factor) const;
  bool operator==(const Ordering &) const = default;

private:
  std::vector<Rational> vertex_;
  std::vector<Rational> edge_;
};

/// Checks the ordering identities against a graph; empty means consistent.
std::vector<std::string> ordering_violations(const EdgeIndexedGraph &graph,
                                             const Ordering &ordering);

/// Propagates N from `base` along a breadth-first spanning tree (neighbors
/// in increasing edge order) and checks every remaining edge pair.
/// Throws NonUnimodular on an inconsistent cycle; the graph must be
/// connected.
Ordering compute_ordering(const EdgeIndexedGraph &graph, VertexId base,
                          const Rational &base_value = 1);

bool is_unimodular(const EdgeIndexedGraph &graph);

/// Rescales by the least positive rational making every value an integer;
/// the result has overall gcd 1.
Ordering minimal_integral_ordering(const Ordering &ordering);

/// Combinatorial ball of the universal covering tree. Node 0 is the root.
/// A node is named by the path of (edge, copy) pairs from the root; the
/// pair stored on a node is its last step. Copy 0 of the edge pointing back
/// to the parent is the parent link, so other copies of that edge run
/// 1..i-1.
struct CoverBall {
  struct Node {
    VertexId projection = 0;
    std::uint32_t parent = kNone;
    EdgeId edge = kNone; // edge of the base graph with terminus = parent's
                         // projection and origin = this projection
    std::uint32_t copy = 0;
    std::uint32_t depth = 0;
    bool truncated = false; // lift of a frontier vertex, not expanded
    bool operator==(const Node &) const = default;
  };
  std::vector<Node> nodes;
  std::uint32_t radius = 0;

  /// Degree of each node inside the ball.
  std::vector<std::uint32_t> degrees() const;
  /// (edge-id, copy) path from the root.
  std::vector<std::pair<std::string, std::uint32_t>>
  label(const EdgeIndexedGraph &graph, std::uint32_t node) const;
  bool operator==(const CoverBall &) const = default;
};

CoverBall universal_cover_ball(const EdgeIndexedGraph &graph, VertexId base,
                               std::uint32_t radius);

/// Local criterion for universal cover X_{m,n}: every V0 vertex has lifted
/// degree m and every V1 vertex lifted degree n (frontier vertices skipped).
bool covers_biregular(const EdgeIndexedGraph &graph, std::int64_t m,
                      std::int64_t n);
std::vector<std::string> biregularity_violations(const EdgeIndexedGraph &graph,
                                                 std::int64_t m,
                                                 std::int64_t n);

/// Breadth-first edge distances from `base` (kNone when unreachable).
std::vector<std::uint32_t> edge_distances(const EdgeIndexedGraph &graph,
                                          VertexId base);

bool is_connected(const EdgeIndexedGraph &graph);
bool is_tree(const EdgeIndexedGraph &graph);

std::string to_string(Part part);

} // namespace treelat

#endif
