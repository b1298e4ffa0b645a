//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>

#include "treelat/graph_io.hpp"
#include "treelat/grouping.hpp"
#include "treelat/indexed_graph.hpp"
#include "treelat/kernels.hpp"

using namespace treelat;

namespace {

// A single star: center c with leaves, every leaf index n.
EdgeIndexedGraph star(int m, int n) {
  GraphBuilder b;
  auto c = b.add_vertex("c", Part::v0);
  for (int i = 0; i < m; ++i) {
    auto l = b.add_vertex("l" + std::to_string(i), Part::v1);
    b.add_edge_pair(c, l, n, 1);
  }
  return std::move(b).build();
}

// Two vertices joined by two edges with indices forming a cycle whose
// product is not 1.
EdgeIndexedGraph bad_cycle() {
  GraphBuilder b;
  auto u = b.add_vertex("u", Part::v0);
  auto v = b.add_vertex("v", Part::v1);
  b.add_edge_pair(u, v, 2, 1);
  b.add_edge_pair(u, v, 1, 1);
  return std::move(b).build();
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("ordering on a star") {
  auto g = star(4, 3);
  CHECK(validate(g).empty());
  auto o = compute_ordering(g, g.vertex_by_id("c"), 1);
  CHECK(o.vertex(g.vertex_by_id("c")) == 1);
  for (int i = 0; i < 4; ++i)
    CHECK(o.vertex(g.vertex_by_id("l" + std::to_string(i))) == 3);
  CHECK(ordering_violations(g, o).empty());
  CHECK(o.is_integral());
  CHECK(covers_biregular(g, 4, 3));
  CHECK(covolume(g, o, Selector::parse("v0")) == 1);
  CHECK(covolume(g, o, Selector::parse("v1")) == Rational(4, 3));
}

TEST_CASE("ordering identity N(e) = N(t e)/i(e) on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_unimodular_graph(rng, 8);
    REQUIRE(is_unimodular(g));
    auto o = compute_ordering(g, 0, Rational(5, 7));
    CHECK(ordering_violations(g, o).empty());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto &ed = g.edge(e);
      CHECK(o.edge(e) == o.vertex(ed.terminus) / Rational(ed.index));
      CHECK(o.edge(e) == o.edge(ed.reverse));
    }
    auto mi = minimal_integral_ordering(o);
    CHECK(mi.is_integral());
    CHECK(is_effective_cyclic(mi));
  }
}

TEST_CASE("non-unimodular cycles are rejected") {
  auto g = bad_cycle();
  CHECK_FALSE(is_unimodular(g));
  try {
    compute_ordering(g, 0);
    FAIL("expected NonUnimodular");
  } catch (const Error &e) {
    CHECK(e.name() == "NonUnimodular");
    CHECK(e.kind() == Error::Kind::invariant);
  }
}

TEST_CASE("json round trip and malformed input") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    auto g = random_unimodular_graph(rng, 6);
    auto j = graph_to_json(g);
    auto g2 = graph_from_json(j);
    CHECK(graph_to_json(g2) == j);
    auto o = compute_ordering(g, 0);
    CHECK(ordering_from_json(g2, ordering_to_json(g, o)) == o);
  }
  CHECK_THROWS_AS(graph_from_json(Json::parse("[1,2]")), Error);
  auto j = graph_to_json(star(3, 3));
  j["edges"][0]["index"] = 0;
  try {
    graph_from_json(j);
    FAIL("expected InvalidGraph");
  } catch (const Error &e) {
    CHECK(e.kind() == Error::Kind::invariant);
  }
}

TEST_CASE("dot export mentions every vertex") {
  auto g = star(3, 3);
  auto dot = graph_to_dot(g, compute_ordering(g, 0));
  CHECK(dot.find("graph") != std::string::npos);
  for (const auto &v : g.vertices())
    CHECK(dot.find(v.id) != std::string::npos);
}

TEST_CASE("universal cover ball of a star is biregular") {
  auto g = star(3, 4);
  auto ball = universal_cover_ball(g, 0, 4);
  auto deg = ball.degrees();
  for (std::uint32_t i = 0; i < ball.nodes.size(); ++i) {
    if (ball.nodes[i].depth >= 4)
      continue;
    const bool center = g.vertex(ball.nodes[i].projection).part == Part::v0;
    CHECK(deg[i] == (center ? 3u : 4u));
  }
  // Centers branch into 2 new leaves, leaves into 3 new centers.
  CHECK(ball.nodes.size() == 1 + 3 + 9 + 18 + 54);
}

TEST_CASE("serial and parallel cover balls agree") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 8; ++t) {
    auto g = random_unimodular_graph(rng, 6);
    CHECK(kernels::cover_ball_serial(g, 0, 4) ==
          kernels::cover_ball_parallel(g, 0, 4));
  }
}

TEST_CASE("serial and parallel ball kernels agree") {
  std::mt19937_64 rng(5);
  std::vector<std::uint32_t> dist(20000);
  std::vector<Integer> val(dist.size());
  std::vector<char> inc(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    dist[i] = static_cast<std::uint32_t>(rng() % 40);
    val[i] = static_cast<unsigned long>(rng() % 1000);
    inc[i] = static_cast<char>(rng() % 2);
  }
  dist[3] = kNone;
  CHECK(kernels::ball_counts_serial(dist, 20, 2) ==
        kernels::ball_counts_parallel(dist, 20, 2));
  CHECK(kernels::ball_max_serial(dist, val, inc, 20, 2) ==
        kernels::ball_max_parallel(dist, val, inc, 20, 2));
}

TEST_CASE("edge distances") {
  auto g = star(3, 3);
  auto d = edge_distances(g, 0);
  CHECK(d[0] == 0);
  for (VertexId v = 1; v < g.vertex_count(); ++v)
    CHECK(d[v] == 1);
  CHECK(is_tree(g));
  CHECK(is_connected(g));
}

}
