//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_GRAPH_IO_HPP
#define TREELAT_GRAPH_IO_HPP

#include <optional>
#include <string>

#include "json.hpp"

#include "treelat/indexed_graph.hpp"

namespace treelat {

using Json = nlohmann::ordered_json;

Json graph_to_json(const EdgeIndexedGraph &graph);
/// Rejects malformed documents (ParseError) and structurally invalid graphs
/// (InvalidGraph, carrying the diagnostics of `validate`).
EdgeIndexedGraph graph_from_json(const Json &doc);

Json ordering_to_json(const EdgeIndexedGraph &graph, const Ordering &ordering);
Ordering ordering_from_json(const EdgeIndexedGraph &graph, const Json &doc);

/// Undirected DOT; each edge pair is drawn once with i(e) at the head and
/// i(reverse e) at the tail. Vertex labels show N when an ordering is given.
std::string graph_to_dot(const EdgeIndexedGraph &graph,
                         const std::optional<Ordering> &ordering = {});

Json rational_to_json(const Rational &r);
Rational rational_from_json(const Json &j);

Json read_json_file(const std::string &path);

} // namespace treelat

#endif
