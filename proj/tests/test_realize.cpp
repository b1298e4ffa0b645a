//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>
#include <set>

#include "treelat/realize.hpp"

using namespace treelat;

namespace {

Weights pow2() { return Weights::canonical(3); } // h(j) = 2^j

} // namespace

TEST_SUITE("realize") {

TEST_CASE("digit sequence examples") {
  auto a = digit_sequence(Rational(1, 2), pow2(), 4);
  CHECK(a.digits == PeriodicSequence{{1}, {}});
  auto b = digit_sequence(Rational(5, 4), pow2(), 4);
  CHECK(b.digits == PeriodicSequence{{2, 1}, {}});
  auto c = digit_sequence(Rational(1, 3), pow2(), 4);
  CHECK(c.digits == PeriodicSequence{{}, {0, 1}});
  CHECK(c.sum() == Rational(1, 3));
}

TEST_CASE("normalize") {
  CHECK(normalize({{1, 2, 1, 2}, {1, 2, 1, 2}}) == PeriodicSequence{{}, {1, 2}});
  CHECK(normalize({{3, 0, 0}, {0, 0}}) == PeriodicSequence{{3}, {}});
  CHECK(normalize({{5, 2}, {1, 2}}) == PeriodicSequence{{5}, {2, 1}});
}

TEST_CASE("greedy soundness and exact sums") {
  std::mt19937_64 rng(17);
  for (std::uint64_t n : {3, 4, 6}) {
    AdmissibleSequence s =
        n == 6 ? AdmissibleSequence(6, {}, {3, 6}) : AdmissibleSequence::canonical(n);
    Weights h(s);
    for (int t = 0; t < 30; ++t) {
      const Rational rho = make_rational(static_cast<long>(1 + rng() % 200),
                                         static_cast<long>(1 + rng() % 60));
      const auto bound = default_digit_bound(h, rho);
      auto d = digit_sequence(rho, h, bound);
      CHECK(d.sum() == rho);
      for (std::size_t j = 1; j <= 25; ++j) {
        CHECK(d.digits.at(j - 1) <= static_cast<std::int64_t>(bound));
        const Rational rest = rho - d.partial_sum(j);
        CHECK(rest >= 0);
        // Once the first digit absorbs the bulk, remainders stay below 1/h(j).
        CHECK(rest < Rational(1) / Rational(h.h(j)));
      }
    }
  }
}

TEST_CASE("digit bound too small is reported") {
  try {
    digit_sequence(Rational(10), pow2(), 4);
    FAIL("expected DigitHorizonExceeded");
  } catch (const Error &e) {
    CHECK(e.name() == "DigitHorizonExceeded");
  }
}

TEST_CASE("skipped level carries a zero digit") {
  auto d = digit_sequence(Rational(7, 5), Weights::canonical(4), 24, 2);
  CHECK(d.digits.at(1) == 0);
  CHECK(d.sum() == Rational(7, 5));
}

TEST_CASE("kappa0") {
  CHECK(kappa0(Weights::canonical(4)) == Rational(3, 2));
  CHECK(kappa0(pow2()) == 2);
  CHECK(kappa0(Weights(AdmissibleSequence(6, {}, {3, 6}))) == Rational(5, 3));
}

TEST_CASE("realize_covolume examples") {
  auto r = realize_covolume(3, 4, 3);
  REQUIRE(r.digits);
  CHECK(r.digits->digits == PeriodicSequence{{2}, {}});
  CHECK(*covolume_exact(r.spec, r.sequence, Selector{}) == 3);
  // kappa0 + p/(n-1)^j uses one block at level j.
  auto single = realize_covolume(Rational(3, 2) + Rational(2, 9), 4, 4);
  CHECK(single.digits->digits == PeriodicSequence{{0, 2}, {}});
  CHECK_THROWS_AS(realize_covolume(2, 4, 3), Error);
}

TEST_CASE("realize_covolume is exact across targets") {
  std::mt19937_64 rng(23);
  for (std::uint64_t n : {3, 4, 6}) {
    const std::uint64_t m = std::max<std::uint64_t>(n, 4);
    const Rational k0(n - 1, n - 2);
    for (int t = 0; t < 8; ++t) {
      const Rational kappa =
          k0 + make_rational(static_cast<long>(1 + rng() % 500),
                             static_cast<long>(1 + rng() % 50));
      auto r = realize_covolume(kappa, m, n);
      CHECK(*covolume_exact(r.spec, r.sequence, Selector{}) == kappa);
      CHECK(spec_violations(r.spec).empty());
    }
  }
}

TEST_CASE("realize_covolume_growth with exact nu") {
  auto f = GrowthFunction::polynomial({1, 1});
  auto r = realize_covolume_growth(Rational(7, 2), f, 4, 4);
  REQUIRE(r.tf_level);
  REQUIRE(r.nu_exact);
  CHECK(*r.nu_exact < Rational(7, 2) - Rational(3, 2));
  CHECK(*covolume_exact(r.spec, r.sequence, Selector{}) == Rational(7, 2));
  CHECK(r.digits->digits.at(*r.tf_level - 1) == 0);
  // Smallest level: the level before fails the bound.
  if (*r.tf_level > 1)
    CHECK(f.series_upper(Weights::canonical(4), *r.tf_level - 1, 0) >= 2);
}

TEST_CASE("f = 1 glues a ray and keeps the covolume") {
  auto r = realize_covolume_growth(3, GrowthFunction::constant_one(), 4, 3);
  CHECK(*covolume_exact(r.spec, r.sequence, Selector{}) == 3);
}

TEST_CASE("compensating rule converges to kappa") {
  auto f = GrowthFunction::exponential(Rational(7, 4));
  auto r = realize_covolume_growth(4, f, 4, 4);
  CHECK(r.spec.rule->kind == DigitRule::Kind::compensating);
  Rational prev = -1;
  for (std::size_t d : {10, 20, 30}) {
    auto rep = covolume(r.spec, r.sequence, Selector{}, d);
    CHECK(rep.interval.contains(4));
    if (prev >= 0)
      CHECK(rep.interval.width() < prev);
    prev = rep.interval.width();
  }
}

TEST_CASE("unacceptable f is rejected") {
  try {
    realize_covolume_growth(4, GrowthFunction::exponential(3), 4, 4);
    FAIL("expected NotAcceptable");
  } catch (const Error &e) {
    CHECK(e.name() == "NotAcceptable");
  }
}

TEST_CASE("small kappa goes through the tower") {
  auto f = GrowthFunction::constant_one();
  auto r = realize_covolume_growth(Rational(1, 3), f, 4, 4);
  REQUIRE(r.tower_k);
  CHECK(r.units > 1);
  CHECK(r.spec_covolume == Rational(1, 3) * Rational(r.units));
  auto sh = shrink_covolume(r.spec, r.sequence, *r.tower_k, *r.tower_k + 1);
  REQUIRE(sh.covolume);
  CHECK(*sh.covolume == Rational(1, 3));
}

TEST_CASE("tower verification, serial and parallel") {
  for (std::uint64_t n : {3, 4, 5})
    for (std::size_t k : {1, 2, 3}) {
      auto tower = build_semidirect_tower(n, k);
      auto ser = kernels::tower_check_serial(tower, k + 1);
      auto par = kernels::tower_check_parallel(tower, k + 1);
      CHECK(ser == par);
      CHECK(ser.ok());
      auto rep = verify_tower(tower, k + 1);
      CHECK(rep.faithful);
      CHECK(rep.units == totient(static_cast<std::uint64_t>(
                             pow(Integer(n - 1), k).get_ui())));
      CHECK(rep.faithfulness.size() == rep.units - 1);
    }
  CHECK(build_semidirect_tower(4, 2).unit_count() == 6);
  CHECK(build_semidirect_tower(3, 1).unit_count() == 1);
}

TEST_CASE("shrink scaling law and grouping validity") {
  for (std::uint64_t n : {3, 4}) {
    auto s = AdmissibleSequence::canonical(n);
    auto spec = build_star_ray(4);
    for (std::size_t k : {1, 2}) {
      auto res = shrink_covolume(spec, s, k, 4);
      CHECK(grouping_violations(res.grouping).empty());
      auto base = compute_ordering(res.truncation.graph, res.truncation.base);
      CHECK(res.grouping.order_function() ==
            base.scaled(Rational(res.units)));
      CHECK(*res.covolume == Rational(n - 1, n - 2) / Rational(res.units));
      CHECK(res.interval.contains(*res.covolume));
    }
  }
  auto res = shrink_covolume(build_star_ray(4), AdmissibleSequence::canonical(4),
                             2, 4);
  CHECK(*res.covolume == Rational(1, 4));
}

TEST_CASE("shrink with trivial H matches the cyclic grouping") {
  auto s = AdmissibleSequence::canonical(3);
  auto res = shrink_covolume(build_star_ray(3), s, 1, 3);
  CHECK(res.units == 1);
  auto base = compute_ordering(res.truncation.graph, res.truncation.base);
  CHECK(res.grouping.order_function() == base);
}

TEST_CASE("shrink preconditions") {
  auto s = AdmissibleSequence::canonical(4);
  CHECK_THROWS_AS(shrink_covolume(build_single_star(4), s, 2, 3), Error);
  CHECK_THROWS_AS(shrink_covolume(build_star_ray(4), s, 3, 2), Error);
}

TEST_CASE("sequence-indexed shrink") {
  AdmissibleSequence s(6, {}, {3, 6});
  auto res = shrink_covolume(build_star_ray(6), s, 2, 4);
  CHECK(res.units == totient(10));
  CHECK(grouping_violations(res.grouping).empty());
  CHECK(*res.covolume == Rational(5, 3) / Rational(4));
}

TEST_CASE("realize_full") {
  AdmissibleSequence s(6, {}, {3, 6});
  auto f = GrowthFunction::polynomial({1, 1});
  auto r = realize_full(4, f, s, 6);
  CHECK(*covolume_exact(r.spec, s, Selector{}) == 4);
  auto stab = stabilizer_growth_levels(r.spec, s, 10, true);
  Weights h(s);
  for (std::size_t k = 0; k <= 10; ++k)
    CHECK(stab[k] == h.h(k));
  // Independence from f and kappa.
  auto r2 = realize_full(Rational(7, 3), GrowthFunction::constant_one(), s, 6);
  CHECK(stabilizer_growth_levels(r2.spec, s, 10, true) == stab);
  CHECK_THROWS_AS(realize_full(4, f, AdmissibleSequence::canonical(7), 7), Error);
  CHECK_THROWS_AS(realize_full(4, f, AdmissibleSequence::canonical(4), 4), Error);
}

TEST_CASE("sampler yields distinct exact sequences") {
  auto h = Weights::canonical(3);
  const Rational rho(1);
  auto list = sample_digit_sequences(rho, h, default_digit_bound(h, rho), 40, 5);
  CHECK(list.size() == 40);
  std::set<std::string> seen;
  for (const auto &d : list) {
    CHECK(d.sum() == rho);
    seen.insert(d.digits.notation());
  }
  CHECK(seen.size() == 40);
  auto again = sample_digit_sequences(rho, h, default_digit_bound(h, rho), 40, 5);
  for (std::size_t i = 0; i < list.size(); ++i)
    CHECK(again[i].digits == list[i].digits);
}

TEST_CASE("realization report fields") {
  auto r = realize_covolume_growth(4, GrowthFunction::exponential(Rational(3, 2)),
                                   4, 4);
  auto j = realization_report(r, 12);
  CHECK(j.contains("inputs"));
  CHECK(j.contains("k"));
  CHECK(j["covolume"].contains("interval"));
  CHECK(j["growth"]["ball"].size() == 13);
}

}
