//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_RATIONAL_HPP
#define TREELAT_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace treelat {

using Integer = mpz_class;
using Rational = mpq_class;

/// Error raised by library operations. The category drives CLI exit codes.
class Error : public std::runtime_error {
public:
  enum class Kind { parse, invariant, precondition };

  Error(Kind kind, std::string name, const std::string &what)
      : std::runtime_error(name + ": " + what), kind_(kind),
        name_(std::move(name)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string &name() const noexcept { return name_; }

private:
  Kind kind_;
  std::string name_;
};

inline Error parse_error(const std::string &what) {
  return Error(Error::Kind::parse, "ParseError", what);
}
inline Error invariant_error(std::string name, const std::string &what) {
  return Error(Error::Kind::invariant, std::move(name), what);
}
inline Error precondition_error(std::string name, const std::string &what) {
  return Error(Error::Kind::precondition, std::move(name), what);
}

/// Canonical "p/q" with q > 0 and gcd(p, q) = 1; integers print as "p/1".
std::string to_string(const Rational &r);
std::string to_string(const Integer &z);

/// Accepts "p/q", "p" or a decimal literal such as "2.25".
Rational parse_rational(std::string_view text);

Rational make_rational(const Integer &num, const Integer &den = 1);

Integer pow(const Integer &base, unsigned long exp);
Rational pow(const Rational &base, unsigned long exp);

Integer floor(const Rational &r);
Integer ceil(const Rational &r);

Integer gcd(const Integer &a, const Integer &b);
Integer lcm(const Integer &a, const Integer &b);

bool is_integral(const Rational &r);
bool is_prime(const Integer &p);

/// Euler's totient; the argument must fit in 64 bits.
std::uint64_t totient(std::uint64_t n);

/// Interval [lo, hi] of rationals used for enclosures.
struct RationalInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational &x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
};

std::string to_string(const RationalInterval &iv);

} // namespace treelat

#endif
