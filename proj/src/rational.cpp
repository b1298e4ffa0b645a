//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/rational.hpp"

#include <cctype>

namespace treelat {

std::string to_string(const Rational &r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Integer &z) { return z.get_str(); }

std::string to_string(const RationalInterval &iv) {
  return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
}

Rational make_rational(const Integer &num, const Integer &den) {
  if (den == 0)
    throw precondition_error("DivisionByZero", "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return parse_error("not a rational number: '" + s + "'"); };
  if (s.empty())
    throw bad();
  auto valid_int = [](std::string_view t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size())
      return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+')
      t.erase(0, 1);
    return t;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
      throw bad();
    Integer d(strip_plus(den));
    if (d == 0)
      throw bad();
    return make_rational(Integer(strip_plus(num)), d);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+")
      whole += "0";
    if (!valid_int(whole) || frac.empty() || !valid_int(frac) ||
        frac[0] == '-' || frac[0] == '+')
      throw bad();
    Integer scale = pow(Integer(10), frac.size());
    Integer w(strip_plus(whole));
    Integer f(frac);
    Integer num = abs(w) * scale + f;
    return make_rational(neg ? Integer(-num) : num, scale);
  }
  if (!valid_int(s))
    throw bad();
  return Rational(Integer(strip_plus(s)));
}

Integer pow(const Integer &base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational pow(const Rational &base, unsigned long exp) {
  Rational b = base;
  b.canonicalize();
  return make_rational(pow(b.get_num(), exp), pow(b.get_den(), exp));
}

Integer floor(const Rational &r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational &r) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

Integer gcd(const Integer &a, const Integer &b) {
  Integer out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer lcm(const Integer &a, const Integer &b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

bool is_integral(const Rational &r) {
  Rational c = r;
  c.canonicalize();
  return c.get_den() == 1;
}

bool is_prime(const Integer &p) {
  if (p < 2)
    return false;
  return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

std::uint64_t totient(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0)
        n /= p;
      result -= result / p;
    }
  }
  if (n > 1)
    result -= result / n;
  return result;
}

} // namespace treelat
