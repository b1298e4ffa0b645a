//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include "treelat/weights.hpp"

using namespace treelat;

namespace {

// Plain partial sum, used as an oracle for closed forms.
Rational brute_series(const Weights &h, std::size_t terms,
                      const std::function<Rational(std::size_t)> &c) {
  Rational s = 0;
  for (std::size_t j = 0; j < terms; ++j)
    s += c(j) / Rational(h.h(j));
  return s;
}

} // namespace

TEST_SUITE("weights") {

TEST_CASE("rational formatting and parsing") {
  CHECK(to_string(Rational(4, 2)) == "2/1");
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK(totient(9) == 6);
  CHECK(totient(2) == 1);
  CHECK(totient(1) == 1);
  CHECK(is_prime(Integer(97)));
  CHECK_FALSE(is_prime(Integer(91)));
}

TEST_CASE("admissibility") {
  CHECK(AdmissibleSequence::canonical(6).violations().empty());
  CHECK(AdmissibleSequence(6, {}, {3, 6}).violations().empty());
  CHECK_FALSE(AdmissibleSequence(6, {}, {4}).violations().empty());
  CHECK_FALSE(AdmissibleSequence(6, {}, {2}).violations().empty());
  CHECK_FALSE(AdmissibleSequence(2, {}, {2}).violations().empty());
  CHECK_THROWS_AS(Weights(AdmissibleSequence(6, {}, {4})), Error);
}

TEST_CASE("h for alternating (3,6)") {
  Weights h(AdmissibleSequence(6, {}, {3, 6}));
  const long expect[] = {1, 2, 10, 20, 100, 200, 1000};
  for (std::size_t j = 0; j < 7; ++j)
    CHECK(h.h(j) == expect[j]);
  CHECK(h.period_product() == 10);
}

TEST_CASE("h(j) >= 2^j for admissible sequences") {
  for (std::uint64_t n : {3, 4, 6, 8, 9, 12})
    for (std::uint64_t s = 3; s <= n; ++s) {
      if (n % s)
        continue;
      Weights h(AdmissibleSequence(n, {n}, {s}));
      for (std::size_t j = 0; j < 20; ++j)
        CHECK(h.h(j) >= pow(Integer(2), j));
    }
}

TEST_CASE("kappa0 closed forms") {
  for (std::uint64_t n = 3; n <= 10; ++n) {
    auto h = Weights::canonical(n);
    const Rational k0 = h.kappa0();
    CHECK(k0 == Rational(n - 1, n - 2));
    // Partial sums approach from below, within the geometric tail.
    Rational partial = brute_series(h, 40, [](std::size_t) { return 1; });
    CHECK(partial < k0);
    CHECK(k0 - partial <= Rational(2) / Rational(h.h(40)));
  }
  // h = 1,2,10,20,...: sum over even and odd j is (1 + 1/2) * 10/9.
  CHECK(Weights(AdmissibleSequence(6, {}, {3, 6})).kappa0() == Rational(5, 3));
  CHECK(Weights::canonical(3).kappa0() == 2);
}

TEST_CASE("periodic_series matches brute force") {
  Weights h(AdmissibleSequence(6, {6}, {3, 6}));
  auto c = [](std::size_t j) {
    return j < 3 ? Rational(static_cast<long>(j)) : Rational((j % 3) + 1);
  };
  const Rational closed = h.periodic_series(c, 3, 3, 0);
  const Rational partial = brute_series(h, 60, c);
  CHECK(partial <= closed);
  CHECK(closed - partial <= Rational(3 * 2) / Rational(h.h(60)));
}

TEST_CASE("polynomial_series matches brute force") {
  Weights h = Weights::canonical(4);
  std::vector<Integer> p{1, 2, 1}; // (j+1)^2
  const Rational closed = h.polynomial_series(p, 1);
  Rational partial = 0;
  for (std::size_t j = 0; j < 80; ++j)
    partial += Rational(eval_polynomial(p, j)) / Rational(h.h(j + 1));
  CHECK(partial <= closed);
  CHECK(closed - partial < Rational(1, 1000000000));
}

TEST_CASE("inverse_tail") {
  Weights h = Weights::canonical(5);
  CHECK(h.inverse_tail(0) == h.kappa0());
  CHECK(h.inverse_tail(2) == h.kappa0() - 1 - Rational(1, 4));
}

}
