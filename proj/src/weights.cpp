//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/weights.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace treelat {

std::int64_t PeriodicSequence::at(std::size_t i) const {
  if (i < prefix.size())
    return prefix[i];
  if (period.empty())
    return 0;
  return period[(i - prefix.size()) % period.size()];
}

std::string PeriodicSequence::notation() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < prefix.size(); ++i)
    os << (i ? "," : "") << prefix[i];
  os << ")[";
  for (std::size_t i = 0; i < period.size(); ++i)
    os << (i ? "," : "") << period[i];
  os << "]";
  return os.str();
}

AdmissibleSequence::AdmissibleSequence(std::uint64_t n,
                                       std::vector<std::uint64_t> prefix,
                                       std::vector<std::uint64_t> period)
    : n_(n), prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty())
    throw precondition_error("NotAdmissible",
                             "sequence must have a nonempty repeating block");
  for (auto v : prefix_)
    if (v < 2)
      throw precondition_error("NotAdmissible", "entries must be at least 2");
  for (auto v : period_)
    if (v < 2)
      throw precondition_error("NotAdmissible", "entries must be at least 2");
}

AdmissibleSequence AdmissibleSequence::canonical(std::uint64_t n) {
  return AdmissibleSequence(n, {}, {n});
}

std::uint64_t AdmissibleSequence::at(std::size_t k) const {
  if (k == 0)
    throw precondition_error("IndexOutOfRange", "sequence index starts at 1");
  std::size_t i = k - 1;
  if (i < prefix_.size())
    return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

bool AdmissibleSequence::is_canonical() const {
  auto is_n = [&](std::uint64_t v) { return v == n_; };
  return std::all_of(prefix_.begin(), prefix_.end(), is_n) &&
         std::all_of(period_.begin(), period_.end(), is_n);
}

std::uint64_t AdmissibleSequence::max_entry() const {
  std::uint64_t m = 0;
  for (auto v : prefix_)
    m = std::max(m, v);
  for (auto v : period_)
    m = std::max(m, v);
  return m;
}

std::vector<std::string> AdmissibleSequence::violations() const {
  std::vector<std::string> out;
  if (n_ < 3)
    out.push_back("n must be at least 3");
  if (period_.empty())
    out.push_back("the repeating block must be nonempty");
  auto check = [&](std::uint64_t v) {
    if (v <= 2 || v > n_)
      out.push_back("entry " + std::to_string(v) + " outside (2, n]");
    else if (n_ % v != 0)
      out.push_back("entry " + std::to_string(v) + " does not divide n");
  };
  for (auto v : prefix_)
    check(v);
  for (auto v : period_)
    check(v);
  return out;
}

Weights::Weights(AdmissibleSequence s) : s_(std::move(s)) {
  if (auto v = s_.violations(); !v.empty())
    throw precondition_error("NotAdmissible", v.front());
}

Integer Weights::h(std::size_t j) const {
  Integer out = 1;
  std::size_t pre = std::min(j, preperiod());
  for (std::size_t i = 0; i < pre; ++i)
    out *= ratio(i);
  if (j <= preperiod())
    return out;
  std::size_t rest = j - preperiod();
  std::size_t cycles = rest / period();
  if (cycles > 0)
    out *= pow(period_product(), cycles);
  for (std::size_t i = preperiod() + cycles * period(); i < j; ++i)
    out *= ratio(i);
  return out;
}

Integer Weights::period_product() const {
  Integer p = 1;
  for (auto v : s_.period())
    p *= (v - 1);
  return p;
}

Rational Weights::kappa0() const { return inverse_tail(0); }

Rational Weights::inverse_tail(std::size_t start) const {
  return periodic_series([](std::size_t) { return Rational(1); }, 0, 1, start);
}

Rational
Weights::periodic_series(const std::function<Rational(std::size_t)> &c,
                         std::size_t coeff_preperiod, std::size_t coeff_period,
                         std::size_t start) const {
  std::size_t p = std::max({start, coeff_preperiod, preperiod()});
  Rational sum = 0;
  Integer hj = h(start);
  for (std::size_t j = start; j < p; ++j) {
    sum += c(j) / Rational(hj);
    hj *= ratio(j);
  }
  if (coeff_period == 0)
    return sum;
  std::size_t t = std::lcm(period(), coeff_period);
  Rational block = 0;
  Integer hp = hj;
  for (std::size_t i = 0; i < t; ++i) {
    block += c(p + i) / Rational(hj);
    hj *= ratio(p + i);
  }
  Rational factor = Rational(hj) / Rational(hp); // h(p+t)/h(p) > 1
  sum += block * factor / (factor - 1);
  sum.canonicalize();
  return sum;
}

Integer eval_polynomial(const std::vector<Integer> &coeffs, const Integer &x) {
  Integer acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

Rational Weights::polynomial_series(const std::vector<Integer> &coeffs,
                                    std::size_t shift) const {
  std::size_t j0 =
      preperiod() > shift ? preperiod() - shift : std::size_t{0};
  Rational sum = 0;
  for (std::size_t j = 0; j < j0; ++j)
    sum += Rational(eval_polynomial(coeffs, j)) / Rational(h(j + shift));
  const std::size_t t = period();
  const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  Rational y = Rational(1) / Rational(period_product());
  for (std::size_t r = 0; r < t; ++r) {
    std::size_t base = j0 + r;
    // Forward differences of Q(c) = P(base + c t) at c = 0.
    std::vector<Integer> diff(degree + 1);
    for (std::size_t c = 0; c <= degree; ++c)
      diff[c] = eval_polynomial(coeffs, Integer(base + c * t));
    Rational inner = 0;
    Rational yi = 1;
    Rational one_minus = 1 - y;
    Rational denom = one_minus;
    for (std::size_t i = 0; i <= degree; ++i) {
      inner += Rational(diff[0]) * yi / denom;
      for (std::size_t c = 0; c + 1 < diff.size() - i; ++c)
        diff[c] = diff[c + 1] - diff[c];
      yi *= y;
      denom *= one_minus;
    }
    sum += inner / Rational(h(base + shift));
  }
  sum.canonicalize();
  return sum;
}

} // namespace treelat
