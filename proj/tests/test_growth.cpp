//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>

#include "treelat/growth.hpp"

using namespace treelat;

using V = Verdict::Value;

TEST_SUITE("growth") {

TEST_CASE("evaluation of symbolic families") {
  auto e = GrowthFunction::exponential(Rational(3, 2));
  // ceil(1.5^k) computed independently in double precision.
  for (std::size_t k = 0; k <= 30; ++k)
    CHECK(e.at(k) == Integer(static_cast<long>(std::ceil(std::pow(1.5, k)))));
  auto p = GrowthFunction::parse("poly:1,0,2@1");
  CHECK(p.at(0) == 3); // 1 + 2*1^2
  CHECK(p.at(2) == 19);
  auto st = GrowthFunction::stretched(Rational(1, 2));
  for (std::size_t k = 1; k <= 40; ++k) {
    const double x = std::exp(std::sqrt(static_cast<double>(k)));
    // Skip values too close to an integer for double precision.
    if (std::abs(x - std::round(x)) < 1e-6)
      continue;
    CHECK(st.at(k) == Integer(static_cast<long>(std::ceil(x))));
  }
  auto pr = GrowthFunction::parse("product:6:;3,6");
  const long h[] = {1, 2, 10, 20, 100, 200};
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(pr.at(k) == h[k]);
  CHECK_THROWS_AS(GrowthFunction::parse("exp"), Error);
  CHECK_THROWS_AS(GrowthFunction::parse("nope:1"), Error);
}

TEST_CASE("json round trip") {
  for (const char *text :
       {"one", "poly:1,2,3@2", "exp:7/4", "stretched:1/3", "product:6:3;3,6"}) {
    auto f = GrowthFunction::parse(text);
    auto j = growth_to_json(f);
    CHECK(growth_to_json(growth_from_json(j)) == j);
    CHECK(growth_from_json(j).table(12) == f.table(12));
  }
}

TEST_CASE("symbolic comparisons carry verified witnesses") {
  auto a = GrowthFunction::exponential(Rational(3, 2));
  auto b = GrowthFunction::exponential(Rational(7, 4));
  auto poly = GrowthFunction::polynomial({0, 0, 1}, 1);
  auto st = GrowthFunction::stretched(Rational(1, 2));
  CHECK(equivalent(a, b).value() == V::no);
  CHECK(equivalent(a, a).value() == V::yes);
  CHECK(preceq(poly, st).value == V::yes);
  CHECK(preceq(st, a).value == V::yes);
  CHECK(preceq(a, st).value == V::no);
  // Shifts do not change the class.
  CHECK(equivalent(a, GrowthFunction::exponential(Rational(3, 2), 5)).value() ==
        V::yes);
  auto v = preceq(poly, a);
  REQUIRE(v.witness);
  auto ft = poly.table(v.range);
  for (std::size_t k = 0; k <= v.range; ++k)
    CHECK(ft[k] <= v.witness->scale * a.at(k + v.witness->shift));
}

TEST_CASE("product families separate distinct envelopes") {
  auto s1 = GrowthFunction::parse("product:6:;3,6"); // lambda^2 = 10
  auto s2 = GrowthFunction::parse("product:6:;6,3"); // same envelope
  auto s3 = GrowthFunction::parse("product:6:;6");   // lambda = 5
  CHECK(equivalent(s1, s2).value() == V::yes);
  CHECK(equivalent(s1, s3).value() == V::no);
  CHECK(equivalent(s1, GrowthFunction::exponential(Rational(3))).value() ==
        V::no);
}

TEST_CASE("prefix comparisons on tables") {
  std::vector<Integer> t;
  for (std::size_t k = 0; k <= 120; ++k)
    t.push_back(3 * (k + 1) * (k + 1));
  auto tab = GrowthFunction::tabulated(t);
  auto sq = GrowthFunction::polynomial({1, 2, 1});
  CHECK(equivalent(tab, sq).value() == V::yes);
  auto ex = GrowthFunction::exponential(2);
  CHECK(preceq(ex, tab).value == V::no);
}

TEST_CASE("acceptability") {
  CHECK(is_acceptable(GrowthFunction::constant_one()).value == V::yes);
  CHECK(is_acceptable(GrowthFunction::exponential(Rational(3, 2))).value ==
        V::yes);
  CHECK(is_acceptable(GrowthFunction::exponential(2)).value == V::no); // sum diverges
  CHECK(is_acceptable(GrowthFunction::exponential(3)).value == V::no);
  CHECK(is_acceptable(GrowthFunction::polynomial({2})).value == V::no);
  CHECK(is_acceptable(GrowthFunction::polynomial({1, 1})).value == V::yes);
  // exp(1) = 2.71... > 2 f(0)
  CHECK(is_acceptable(GrowthFunction::stretched(Rational(1, 2))).value ==
        V::no);
  auto tab = GrowthFunction::tabulated({1, 2, 3, 4});
  CHECK(is_acceptable(tab).value == V::undetermined);
  auto tab_tail = GrowthFunction::tabulated(
      {1, 2, 3}, GrowthFunction::polynomial({1, 1}));
  CHECK(is_acceptable(tab_tail).value == V::yes);
}

TEST_CASE("series bounds") {
  auto h = Weights::canonical(4);
  auto f = GrowthFunction::polynomial({1, 1});
  auto exact = f.series_exact(h, 2, 0);
  REQUIRE(exact);
  Rational brute = 0;
  for (std::size_t j = 0; j < 80; ++j)
    brute += Rational(f.at(j)) / Rational(h.h(j + 2));
  CHECK(*exact - brute < Rational(1, 1000000000));
  CHECK(*exact >= brute);
  auto e = GrowthFunction::exponential(Rational(3, 2));
  CHECK_FALSE(e.series_exact(h, 1, 0));
  const Rational up = e.series_upper(h, 1, 0);
  Rational be = 0;
  for (std::size_t j = 0; j < 80; ++j)
    be += Rational(e.at(j)) / Rational(h.h(j + 1));
  CHECK(up >= be);
  // Integer alpha gives an exact geometric series.
  auto two = GrowthFunction::exponential(2);
  CHECK(two.series_exact(h, 0, 0) == Rational(3));
  CHECK_THROWS_AS(geometric_series(Weights::canonical(3), Rational(2), 0, 0),
                  Error);
}

TEST_CASE("p-orders") {
  CHECK(p_order(Integer(48), Integer(2)) == 16);
  CHECK(p_order(Integer(48), Integer(3)) == 3);
  CHECK_THROWS_AS(p_order(Integer(48), Integer(4)), Error);
}

}
