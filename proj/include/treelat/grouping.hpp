//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_GROUPING_HPP
#define TREELAT_GROUPING_HPP

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "treelat/graph_io.hpp"
#include "treelat/group_algebra.hpp"
#include "treelat/indexed_graph.hpp"

namespace treelat {

/// Finite graph of groups over an edge-indexed graph. Edge groups are
/// stored per oriented edge and must agree on e and reverse(e).
struct FiniteGrouping {
  EdgeIndexedGraph graph;
  std::vector<GroupDesc> vertex_groups;
  std::vector<GroupDesc> edge_groups;
  std::vector<Injection> injections; // alpha_e : A_e -> A_{terminus e}

  /// v -> |A_v|, e -> |A_e| as an ordering.
  Ordering order_function() const;
};

/// Index, injectivity and ordering checks. Group elements are enumerated
/// only below `bound`; above it the order identities are checked.
std::vector<std::string>
grouping_violations(const FiniteGrouping &grouping,
                    std::uint64_t bound = kDefaultEnumerationBound);

/// Cyclic groups of order N(.) with alpha_e : [1] -> [i(e)].
FiniteGrouping canonical_cyclic_grouping(const EdgeIndexedGraph &graph,
                                         const Ordering &ordering);

/// gcd of all vertex and edge values is 1.
bool is_effective_cyclic(const Ordering &ordering);

/// Vertex class for covolume sums.
struct Selector {
  enum class Kind { v0, v1, all, explicit_set };
  Kind kind = Kind::v0;
  std::vector<VertexId> vertices; // explicit_set only

  static Selector parse(const std::string &name);
  std::string name() const;
  bool selects(const EdgeIndexedGraph &graph, VertexId v) const;
};

/// Sum of 1/|A_v| (or 1/N(v)) over selected vertices. Throws EmptySelector.
Rational covolume(const FiniteGrouping &grouping, const Selector &selector);
Rational covolume(const EdgeIndexedGraph &graph, const Ordering &ordering,
                  const Selector &selector);

/// Graph map q : (B, j) -> (A, i) with local index data.
struct CoverMap {
  EdgeIndexedGraph source; // B
  EdgeIndexedGraph target; // A
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
  std::vector<std::int64_t> vertex_index; // [A_{q(b)} : B_b], 0 = missing
  std::vector<std::int64_t> edge_index;   // [A_{q(f)} : B_f], 0 = missing
};

std::vector<std::string> verify_cover(const CoverMap &cover);

/// Sum over b in q^{-1}(a) of [A_a : B_b], evaluated at every a.
std::vector<std::int64_t> cover_degrees(const CoverMap &cover);
/// Throws DegreeMismatch if the per-vertex values disagree.
std::int64_t cover_degree(const CoverMap &cover);

/// deg(q) * Vol(A) = Vol(B) over all vertices, after checking that the
/// groupings' orders match the cover's local indices.
bool volume_ratio_check(const CoverMap &cover, const FiniteGrouping &base,
                        const FiniteGrouping &cover_grouping);

enum class CoverMode { topological, group };

/// Deterministic fixtures: a d-sheeted cover with trivial index data that
/// unwinds the first non-tree edge pair (topological), or the identity graph
/// map with every local index d (group).
CoverMap build_index_cover(const EdgeIndexedGraph &base, std::int64_t d,
                           CoverMode mode);

/// Orderings of base and cover that realize the cover's local indices:
/// the base ordering is the minimal integral one scaled so that the cover
/// ordering N_B(b) = N_A(q b) / [A : B_b] is integral.
std::pair<Ordering, Ordering> cover_orderings(const CoverMap &cover);

/// Random connected unimodular graph with at most `max_vertices` vertices,
/// built from random vertex orders so that every index is integral.
EdgeIndexedGraph random_unimodular_graph(std::mt19937_64 &rng,
                                         std::uint32_t max_vertices,
                                         bool allow_cycles = true);

Json grouping_to_json(const FiniteGrouping &grouping,
                      std::uint64_t bound = 4096);
Json cover_to_json(const CoverMap &cover);
/// The document may embed "source" and "target" graphs; otherwise they are
/// passed in.
CoverMap cover_from_json(const Json &doc,
                         const EdgeIndexedGraph *source = nullptr,
                         const EdgeIndexedGraph *target = nullptr);

Integer p_part(const Integer &n, const Integer &p);

} // namespace treelat

#endif
