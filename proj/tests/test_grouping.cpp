//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>

#include "cover_checks.hpp"
#include "treelat/group_algebra.hpp"
#include "treelat/grouping.hpp"

using namespace treelat;

TEST_SUITE("grouping") {

TEST_CASE("group algebra basics") {
  auto c = GroupDesc::cyclic(12);
  CHECK(enumerate_elements(c, 100).size() == 12);
  auto p = GroupDesc::product(4, 6);
  CHECK(p.order() == 24);
  CHECK(enumerate_elements(p, 100).size() == 24);
  // [1] -> [3] embeds Z/4 into Z/12.
  Injection inj{Injection::Kind::cyclic_multiply, 3};
  CHECK(check_injection(inj, GroupDesc::cyclic(4), c, 1000).empty());
  Injection bad{Injection::Kind::cyclic_multiply, 2};
  CHECK_FALSE(check_injection(bad, GroupDesc::cyclic(4), c, 1000).empty());
}

TEST_CASE("semidirect groups are groups") {
  auto tower = std::make_shared<const SemidirectTower>(Weights::canonical(4), 1);
  auto g = GroupDesc::semidirect(tower, 2, 2);
  CHECK(g.order() == 9 * 2 * 2);
  auto els = enumerate_elements(g, 1000);
  REQUIRE(els.size() == 36);
  // Associativity on a sample and closure.
  for (std::size_t i = 0; i < els.size(); i += 5)
    for (std::size_t j = 0; j < els.size(); j += 7)
      for (std::size_t k = 0; k < els.size(); k += 11) {
        auto l = multiply(g, multiply(g, els[i], els[j]), els[k]);
        auto r = multiply(g, els[i], multiply(g, els[j], els[k]));
        CHECK(l == r);
      }
  auto from = GroupDesc::semidirect(tower, 1, 1);
  CHECK(check_injection({Injection::Kind::tower_step, 1}, from,
                        GroupDesc::semidirect(tower, 2, 1), 1000)
            .empty());
  CHECK(check_injection({Injection::Kind::first_factor, 1}, from,
                        GroupDesc::semidirect(tower, 1, 3), 1000)
            .empty());
}

TEST_CASE("canonical cyclic grouping realizes the ordering") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    auto g = random_unimodular_graph(rng, 7);
    auto o = minimal_integral_ordering(compute_ordering(g, 0));
    auto gr = canonical_cyclic_grouping(g, o);
    CHECK(grouping_violations(gr).empty());
    CHECK(gr.order_function() == o);
    CHECK(covolume(gr, Selector::parse("all")) == covolume(g, o, Selector::parse("all")));
  }
}

TEST_CASE("non-integral orderings are rejected") {
  GraphBuilder b;
  auto u = b.add_vertex("u", Part::v0);
  auto v = b.add_vertex("v", Part::v1);
  b.add_edge_pair(u, v, 2, 1);
  auto g = std::move(b).build();
  auto o = compute_ordering(g, v, 1); // N(u) = 1/2
  try {
    canonical_cyclic_grouping(g, o);
    FAIL("expected NonIntegralOrdering");
  } catch (const Error &e) {
    CHECK(e.name() == "NonIntegralOrdering");
  }
}

TEST_CASE("selectors") {
  CHECK(Selector::parse("v1").kind == Selector::Kind::v1);
  CHECK(Selector::parse("all").name() == "all");
  CHECK_THROWS_AS(Selector::parse("nope"), Error);
}

TEST_CASE("generated covers satisfy degree, volume and divisibility") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 30; ++t) {
    auto base = random_unimodular_graph(rng, 6, t % 2 == 0);
    for (auto mode : {CoverMode::group, CoverMode::topological}) {
      if (mode == CoverMode::topological && is_tree(base))
        continue;
      auto cover = build_index_cover(base, 2 + t % 3, mode);
      auto failures = testing::check_cover(cover);
      CHECK_MESSAGE(failures.empty(), (failures.empty() ? "" : failures[0]));
      CHECK(cover_degree(cover) == 2 + t % 3);
    }
  }
}

TEST_CASE("identity cover has degree 1") {
  std::mt19937_64 rng(1);
  auto base = random_unimodular_graph(rng, 5);
  auto cover = build_index_cover(base, 1, CoverMode::group);
  CHECK(cover_degree(cover) == 1);
}

TEST_CASE("cover json round trip") {
  std::mt19937_64 rng(4);
  auto base = random_unimodular_graph(rng, 5);
  auto cover = build_index_cover(base, 2, CoverMode::group);
  auto j = cover_to_json(cover);
  auto back = cover_from_json(j);
  CHECK(cover_to_json(back) == j);
}

TEST_CASE("tampered covers are caught") {
  std::mt19937_64 rng(8);
  auto base = random_unimodular_graph(rng, 5);
  auto cover = build_index_cover(base, 3, CoverMode::group);
  cover.vertex_index[0] = 2;
  CHECK_FALSE(verify_cover(cover).empty());
}

TEST_CASE("topological covers need a cycle") {
  GraphBuilder b;
  auto u = b.add_vertex("u", Part::v0);
  auto v = b.add_vertex("v", Part::v1);
  b.add_edge_pair(u, v, 1, 1);
  auto tree = std::move(b).build();
  CHECK_THROWS_AS(build_index_cover(tree, 2, CoverMode::topological), Error);
}

}
