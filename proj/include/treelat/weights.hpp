//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_WEIGHTS_HPP
#define TREELAT_WEIGHTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treelat/rational.hpp"

namespace treelat {

/// Eventually periodic sequence of integers, indexed from zero. An empty
/// period means the sequence is zero after its prefix.
struct PeriodicSequence {
  std::vector<std::int64_t> prefix;
  std::vector<std::int64_t> period;

  std::int64_t at(std::size_t i) const;
  bool finite() const { return period.empty(); }
  /// "(1,2)[3,4]" : prefix in parentheses, repeating block in brackets.
  std::string notation() const;
  bool operator==(const PeriodicSequence &) const = default;
};

/// Sequence s = (s_1, s_2, ...) whose entries divide n with 2 < s_k <= n.
/// Stored eventually periodic; `at(k)` is 1-based.
class AdmissibleSequence {
public:
  AdmissibleSequence(std::uint64_t n, std::vector<std::uint64_t> prefix,
                     std::vector<std::uint64_t> period);

  /// The constant sequence s_k = n, which yields the canonical indexing.
  static AdmissibleSequence canonical(std::uint64_t n);

  std::uint64_t n() const { return n_; }
  std::uint64_t at(std::size_t k) const;
  std::uint64_t r(std::size_t k) const { return n_ / at(k); }
  const std::vector<std::uint64_t> &prefix() const { return prefix_; }
  const std::vector<std::uint64_t> &period() const { return period_; }
  bool is_canonical() const;
  std::uint64_t max_entry() const;

  /// Empty list iff admissible for n.
  std::vector<std::string> violations() const;

private:
  std::uint64_t n_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> period_;
};

/// The weights h(0) = 1, h(j) = (s_1 - 1)...(s_j - 1) attached to an
/// admissible sequence. For the canonical sequence h(j) = (n-1)^j.
class Weights {
public:
  explicit Weights(AdmissibleSequence s);
  static Weights canonical(std::uint64_t n) {
    return Weights(AdmissibleSequence::canonical(n));
  }

  const AdmissibleSequence &sequence() const { return s_; }
  std::uint64_t n() const { return s_.n(); }

  Integer h(std::size_t j) const;
  /// h(j+1) / h(j) = s_{j+1} - 1.
  std::uint64_t ratio(std::size_t j) const { return s_.at(j + 1) - 1; }

  /// Index from which ratio(j) is periodic.
  std::size_t preperiod() const { return s_.prefix().size(); }
  std::size_t period() const { return s_.period().size(); }
  /// h(j + period) / h(j) for j >= preperiod.
  Integer period_product() const;

  /// Sum over j >= 0 of 1/h(j).
  Rational kappa0() const;

  /// Exact value of sum_{j >= start} c(j) / h(j) where c is eventually
  /// periodic from `coeff_preperiod` with period `coeff_period` (0 means c
  /// vanishes from coeff_preperiod on).
  Rational periodic_series(const std::function<Rational(std::size_t)> &c,
                           std::size_t coeff_preperiod,
                           std::size_t coeff_period, std::size_t start) const;

  /// Exact value of sum_{j >= 0} P(j) / h(j + shift) for a polynomial with
  /// the given coefficients (constant term first).
  Rational polynomial_series(const std::vector<Integer> &coeffs,
                             std::size_t shift) const;

  /// Sum_{j >= start} 1/h(j).
  Rational inverse_tail(std::size_t start) const;

private:
  AdmissibleSequence s_;
};

Integer eval_polynomial(const std::vector<Integer> &coeffs, const Integer &x);

} // namespace treelat

#endif
