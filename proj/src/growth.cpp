//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/growth.hpp"

#include <algorithm>
#include <sstream>

#include "treelat/kernels.hpp"

namespace treelat {

namespace {

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// Coefficients of P(x + t) given those of P(x).
std::vector<Integer> taylor_shift(const std::vector<Integer> &coeffs,
                                  std::size_t t) {
  std::vector<Integer> out(coeffs.size(), 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j)
      out[j] += coeffs[i] * binomial(i, j) * pow(Integer(t), i - j);
  }
  return out;
}

std::size_t degree_of(const std::vector<Integer> &coeffs) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0)
      d = i;
  return d;
}

Rational dyadic(const Integer &num, unsigned long bits) {
  Integer den = 1;
  den <<= bits;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Enclosure of t^beta with dyadic endpoints of `bits` fractional bits.
RationalInterval root_enclosure(std::size_t t, const Rational &beta,
                                unsigned long bits) {
  const unsigned long a = beta.get_num().get_ui();
  const unsigned long b = beta.get_den().get_ui();
  Integer y = pow(Integer(static_cast<unsigned long>(t)), a);
  y <<= bits * b;
  Integer r;
  mpz_root(r.get_mpz_t(), y.get_mpz_t(), b);
  return {dyadic(r, bits), dyadic(r + 1, bits)};
}

// Taylor enclosure of exp on [lo, hi] with nonnegative endpoints.
RationalInterval exp_enclosure(const Rational &lo, const Rational &hi,
                               std::size_t terms) {
  Rational lower = 0, upper = 0, tl = 1, tu = 1;
  for (std::size_t i = 0; i <= terms; ++i) {
    lower += tl;
    upper += tu;
    tl = tl * lo / (i + 1);
    tu = tu * hi / (i + 1);
  }
  // Remainder: hi^(T+1)/(T+1)! * sum (hi/(T+2))^i.
  Rational q = hi / Rational(static_cast<unsigned long>(terms + 2));
  upper += tu / (1 - q);
  return {lower, upper};
}

Integer stretched_ceil(std::size_t t, const Rational &beta) {
  if (t == 0)
    return 1;
  for (unsigned long bits = 32;; bits *= 2) {
    auto x = root_enclosure(t, beta, bits);
    Integer xmax = ceil(x.hi);
    std::size_t terms = 4 * xmax.get_ui() + bits / 2 + 8;
    auto e = exp_enclosure(x.lo, x.hi, terms);
    Integer fl = floor(e.lo), fh = floor(e.hi);
    // exp of a nonzero algebraic number is never an integer, so the
    // enclosure eventually isolates a single integer part.
    if (fl == fh)
      return fl + 1;
  }
}

Integer exponential_value(const Rational &alpha, std::size_t e) {
  Integer num = pow(alpha.get_num(), e), den = pow(alpha.get_den(), e);
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

} // namespace

Rational geometric_series(const Weights &h, const Rational &alpha,
                          std::size_t offset, std::size_t start) {
  const std::size_t pre = h.preperiod();
  std::size_t p0 = std::max(start, pre > offset ? pre - offset : 0);
  Rational sum = 0;
  Rational ai = pow(alpha, start);
  Integer hj = h.h(offset + start);
  for (std::size_t i = start; i < p0; ++i) {
    sum += ai / Rational(hj);
    ai *= alpha;
    hj *= h.ratio(offset + i);
  }
  const std::size_t P = h.period();
  Rational factor = pow(alpha, P) / Rational(h.period_product());
  if (factor >= 1)
    throw precondition_error("DivergentSeries",
                             "alpha^P >= h(j+P)/h(j): series diverges");
  Rational block = 0;
  for (std::size_t t = 0; t < P; ++t) {
    block += ai / Rational(hj);
    ai *= alpha;
    hj *= h.ratio(offset + p0 + t);
  }
  sum += block / (1 - factor);
  sum.canonicalize();
  return sum;
}

GrowthFunction GrowthFunction::polynomial(std::vector<Integer> coeffs,
                                          std::size_t shift) {
  if (coeffs.empty())
    throw precondition_error("InvalidGrowthFunction",
                             "polynomial needs at least one coefficient");
  GrowthFunction f;
  f.family_ = Family::polynomial;
  f.coeffs_ = std::move(coeffs);
  f.coeffs_.resize(degree_of(f.coeffs_) + 1);
  f.shift_ = shift;
  return f;
}

GrowthFunction GrowthFunction::exponential(Rational alpha, std::size_t shift) {
  alpha.canonicalize();
  if (alpha <= 0)
    throw precondition_error("InvalidGrowthFunction", "alpha must be > 0");
  GrowthFunction f;
  f.family_ = Family::exponential;
  f.param_ = alpha;
  f.shift_ = shift;
  return f;
}

GrowthFunction GrowthFunction::stretched(Rational beta, std::size_t shift) {
  beta.canonicalize();
  if (beta <= 0 || beta >= 1)
    throw precondition_error("InvalidGrowthFunction",
                             "stretched exponent must lie in (0, 1)");
  if (beta.get_den() > 64)
    throw precondition_error("InvalidGrowthFunction",
                             "stretched exponent denominator must be <= 64");
  GrowthFunction f;
  f.family_ = Family::stretched;
  f.param_ = beta;
  f.shift_ = shift;
  return f;
}

GrowthFunction GrowthFunction::product(const AdmissibleSequence &s,
                                       std::size_t shift) {
  GrowthFunction f;
  f.family_ = Family::product;
  f.weights_ = std::make_shared<const Weights>(s);
  f.shift_ = shift;
  return f;
}

GrowthFunction GrowthFunction::tabulated(std::vector<Integer> values,
                                         std::optional<GrowthFunction> tail) {
  GrowthFunction f;
  f.family_ = Family::tabulated;
  f.coeffs_ = std::move(values);
  if (tail)
    f.tail_ = std::make_shared<const GrowthFunction>(std::move(*tail));
  return f;
}

bool GrowthFunction::total() const {
  return family_ != Family::tabulated || (tail_ && tail_->total());
}

bool GrowthFunction::has_symbolic_rate() const {
  return family_ != Family::tabulated || (tail_ && tail_->has_symbolic_rate());
}

Integer GrowthFunction::at(std::size_t k) const {
  switch (family_) {
  case Family::polynomial:
    return eval_polynomial(coeffs_, Integer(static_cast<unsigned long>(k + shift_)));
  case Family::exponential:
    return exponential_value(param_, k + shift_);
  case Family::stretched:
    return stretched_ceil(k + shift_, param_);
  case Family::product:
    return weights_->h(k + shift_);
  case Family::tabulated:
    if (k < coeffs_.size())
      return coeffs_[k];
    if (tail_)
      return tail_->at(k);
    throw precondition_error("TableTooShort",
                             "no value at k=" + std::to_string(k) +
                                 " (table has " +
                                 std::to_string(coeffs_.size()) + " entries)");
  }
  return 0;
}

std::vector<Integer> GrowthFunction::table(std::size_t k_max) const {
  std::vector<Integer> out;
  out.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k)
    out.push_back(at(k));
  return out;
}

std::string GrowthFunction::describe() const {
  std::ostringstream os;
  auto shift_suffix = [&] {
    if (shift_ != 0)
      os << "@" << shift_;
  };
  switch (family_) {
  case Family::polynomial:
    os << "poly:";
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      os << (i ? "," : "") << coeffs_[i].get_str();
    shift_suffix();
    break;
  case Family::exponential:
    os << "exp:" << to_string(param_);
    shift_suffix();
    break;
  case Family::stretched:
    os << "stretched:" << to_string(param_);
    shift_suffix();
    break;
  case Family::product: {
    const auto &s = weights_->sequence();
    os << "product:" << s.n() << ":";
    for (std::size_t i = 0; i < s.prefix().size(); ++i)
      os << (i ? "," : "") << s.prefix()[i];
    os << ";";
    for (std::size_t i = 0; i < s.period().size(); ++i)
      os << (i ? "," : "") << s.period()[i];
    shift_suffix();
    break;
  }
  case Family::tabulated:
    os << "table[" << coeffs_.size() << "]";
    if (tail_)
      os << "+" << tail_->describe();
    break;
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::uint64_t> parse_uints(const std::string &text) {
  std::vector<std::uint64_t> out;
  if (text.empty())
    return out;
  for (const auto &item : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw parse_error("expected an unsigned integer, got '" + item + "'");
    }
  }
  return out;
}

} // namespace

GrowthFunction GrowthFunction::parse(const std::string &text) {
  std::string body = text;
  std::size_t shift = 0;
  if (auto at = body.find('@'); at != std::string::npos) {
    auto values = parse_uints(body.substr(at + 1));
    if (values.size() != 1)
      throw parse_error("bad shift in '" + text + "'");
    shift = values[0];
    body = body.substr(0, at);
  }
  if (body == "one" || body == "1")
    return polynomial({1}, shift);
  auto colon = body.find(':');
  if (colon == std::string::npos)
    throw parse_error("growth function '" + text +
                      "' must look like family:parameters");
  std::string family = body.substr(0, colon), rest = body.substr(colon + 1);
  if (family == "poly") {
    std::vector<Integer> coeffs;
    for (const auto &item : split(rest, ',')) {
      Integer c;
      if (item.empty() || c.set_str(item, 10) != 0)
        throw parse_error("bad polynomial coefficient '" + item + "'");
      coeffs.push_back(c);
    }
    return polynomial(std::move(coeffs), shift);
  }
  if (family == "exp")
    return exponential(parse_rational(rest), shift);
  if (family == "stretched")
    return stretched(parse_rational(rest), shift);
  if (family == "product") {
    auto parts = split(rest, ':');
    if (parts.size() != 2)
      throw parse_error("product needs n:prefix;period");
    auto n = parse_uints(parts[0]);
    auto seq = split(parts[1], ';');
    if (n.size() != 1 || seq.size() != 2)
      throw parse_error("product needs n:prefix;period");
    AdmissibleSequence s(n[0], parse_uints(seq[0]), parse_uints(seq[1]));
    if (auto v = s.violations(); !v.empty())
      throw precondition_error("NotAdmissible", v.front());
    return product(s, shift);
  }
  throw parse_error("unknown growth family '" + family + "'");
}

std::optional<Rational> GrowthFunction::series_exact(const Weights &h,
                                                     std::size_t offset,
                                                     std::size_t start) const {
  switch (family_) {
  case Family::polynomial:
    return h.polynomial_series(taylor_shift(coeffs_, start + shift_),
                               offset + start);
  case Family::exponential:
    if (param_ <= 1)
      return h.inverse_tail(offset + start);
    if (is_integral(param_))
      return pow(param_, shift_) * geometric_series(h, param_, offset, start);
    return std::nullopt;
  case Family::stretched:
  case Family::product:
    return std::nullopt;
  case Family::tabulated: {
    Rational sum = 0;
    for (std::size_t i = start; i < coeffs_.size(); ++i)
      sum += Rational(coeffs_[i]) / Rational(h.h(offset + i));
    if (!tail_)
      return std::nullopt;
    auto rest = tail_->series_exact(h, offset, std::max(start, coeffs_.size()));
    if (!rest)
      return std::nullopt;
    sum += *rest;
    sum.canonicalize();
    return sum;
  }
  }
  return std::nullopt;
}

Rational GrowthFunction::series_upper(const Weights &h, std::size_t offset,
                                      std::size_t start) const {
  if (auto exact = series_exact(h, offset, start))
    return *exact;
  switch (family_) {
  case Family::exponential: {
    // ceil(x) < x + 1
    Rational sum = pow(param_, shift_) *
                       geometric_series(h, param_, offset, start) +
                   h.inverse_tail(offset + start);
    sum.canonicalize();
    return sum;
  }
  case Family::tabulated:
    if (tail_) {
      Rational sum = 0;
      for (std::size_t i = start; i < coeffs_.size(); ++i)
        sum += Rational(coeffs_[i]) / Rational(h.h(offset + i));
      sum += tail_->series_upper(h, offset, std::max(start, coeffs_.size()));
      sum.canonicalize();
      return sum;
    }
    break;
  default:
    break;
  }
  throw precondition_error("NoSeriesBound",
                           "no closed-form tail bound for " + describe());
}

} // namespace treelat

namespace treelat {

namespace {

// Asymptotic rate of a symbolic family. Exponential-type rates store
// lambda^P = base with period P, so products and exponentials compare.
struct Rate {
  enum class Kind { polynomial = 0, stretched = 1, exponential = 2 };
  Kind kind = Kind::polynomial;
  std::size_t degree = 0;
  Rational beta;
  Rational base = 1;
  std::size_t period = 1;

  std::string describe() const {
    switch (kind) {
    case Kind::polynomial:
      return "polynomial of degree " + std::to_string(degree);
    case Kind::stretched:
      return "stretched exponential exp(k^" + to_string(beta) + ")";
    case Kind::exponential:
      if (period == 1)
        return "exponential with base " + to_string(base);
      return "exponential with base (" + to_string(base) + ")^(1/" +
             std::to_string(period) + ")";
    }
    return "";
  }
};

Rate rate_of(const GrowthFunction &f) {
  Rate r;
  switch (f.family()) {
  case GrowthFunction::Family::polynomial:
    r.degree = f.coefficients().size() - 1;
    return r;
  case GrowthFunction::Family::exponential:
    if (f.parameter() > 1) {
      r.kind = Rate::Kind::exponential;
      r.base = f.parameter();
    }
    return r;
  case GrowthFunction::Family::stretched:
    r.kind = Rate::Kind::stretched;
    r.beta = f.parameter();
    return r;
  case GrowthFunction::Family::product:
    r.kind = Rate::Kind::exponential;
    r.base = Rational(f.weights().period_product());
    r.period = f.weights().period();
    return r;
  case GrowthFunction::Family::tabulated:
    return rate_of(*f.tail());
  }
  return r;
}

int compare(const Rate &a, const Rate &b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
  case Rate::Kind::polynomial:
    return a.degree == b.degree ? 0 : (a.degree < b.degree ? -1 : 1);
  case Rate::Kind::stretched:
    return cmp(a.beta, b.beta) < 0 ? -1 : (a.beta == b.beta ? 0 : 1);
  case Rate::Kind::exponential: {
    Rational x = pow(a.base, b.period), y = pow(b.base, a.period);
    return x == y ? 0 : (x < y ? -1 : 1);
  }
  }
  return 0;
}

Integer ceil_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Witness search with the position of the maximal ratio for the best
// shift; `k_last` bounds the range of k.
struct Search {
  Witness witness;
  std::size_t argmax = 0;
};

Search search_witness(const std::vector<Integer> &f,
                      const std::vector<Integer> &g, std::size_t k_last,
                      std::size_t max_shift) {
  Search best;
  bool have = false;
  for (std::size_t B = 0; B <= max_shift; ++B) {
    Integer A = 0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k <= k_last; ++k) {
      if (g[k + B] <= 0)
        throw invariant_error("NonPositiveGrowth",
                              "growth values must be >= 1");
      Integer r = ceil_div(f[k], g[k + B]);
      if (r > A) {
        A = r;
        arg = k;
      }
    }
    if (A < 1)
      A = 1;
    if (!have || A < best.witness.scale) {
      best = {{A, B}, arg};
      have = true;
    }
  }
  return best;
}

} // namespace

Witness best_witness(const std::vector<Integer> &f, const GrowthFunction &g,
                     std::size_t max_shift) {
  if (f.empty())
    return {};
  auto gv = g.table(f.size() - 1 + max_shift);
  return search_witness(f, gv, f.size() - 1, max_shift).witness;
}

Verdict preceq(const GrowthFunction &f, const GrowthFunction &g,
               const CompareOptions &options) {
  Verdict v;
  if (f.has_symbolic_rate() && g.has_symbolic_rate()) {
    Rate rf = rate_of(f), rg = rate_of(g);
    v.symbolic = true;
    v.range = options.range;
    if (compare(rf, rg) <= 0) {
      v.value = Verdict::Value::yes;
      v.witness = best_witness(f.table(options.range), g, options.max_shift);
      v.certificate = rf.describe() + " is dominated by " + rg.describe() +
                      "; witness verified on 0.." +
                      std::to_string(options.range);
    } else {
      v.value = Verdict::Value::no;
      v.certificate = rf.describe() + " outgrows " + rg.describe() +
                      ": f(k)/g(k+shift) is unbounded for every shift";
    }
    return v;
  }
  // Prefix comparison on the range where both functions are known.
  auto known = [&](const GrowthFunction &h) -> std::size_t {
    if (h.total())
      return options.range + options.max_shift;
    return h.values().empty() ? 0 : h.values().size() - 1;
  };
  const std::size_t kf = std::min(known(f), options.range);
  const std::size_t kg = known(g);
  const std::size_t shift_cap = std::min(options.max_shift, kg / 2);
  if (f.values().empty() && !f.total()) {
    v.certificate = "empty table";
    return v;
  }
  const std::size_t k_last = std::min(kf, kg - shift_cap);
  v.range = k_last;
  if (k_last < 3) {
    v.certificate = "comparison range 0.." + std::to_string(k_last) +
                    " is too short";
    return v;
  }
  auto fv = f.table(k_last);
  auto gv = g.table(k_last + shift_cap);
  auto s = search_witness(fv, gv, k_last, shift_cap);
  if (s.witness.scale <= options.max_scale) {
    v.value = Verdict::Value::yes;
    v.witness = s.witness;
    v.certificate = "f(k) <= " + s.witness.scale.get_str() + " g(k+" +
                    std::to_string(s.witness.shift) + ") on 0.." +
                    std::to_string(k_last);
  } else if (4 * s.argmax >= 3 * k_last) {
    v.value = Verdict::Value::no;
    v.certificate = "no scale <= " + options.max_scale.get_str() +
                    " with shift <= " + std::to_string(shift_cap) +
                    " works; the ratio still grows at k=" +
                    std::to_string(s.argmax) + " of 0.." +
                    std::to_string(k_last);
  } else {
    v.certificate = "best scale " + s.witness.scale.get_str() +
                    " exceeds the cap but the ratio peaks early";
  }
  return v;
}

Equivalence equivalent(const GrowthFunction &f, const GrowthFunction &g,
                       const CompareOptions &options) {
  return {preceq(f, g, options), preceq(g, f, options)};
}

Verdict::Value Equivalence::value() const {
  if (forward.value == Verdict::Value::no ||
      backward.value == Verdict::Value::no)
    return Verdict::Value::no;
  if (forward.value == Verdict::Value::yes &&
      backward.value == Verdict::Value::yes)
    return Verdict::Value::yes;
  return Verdict::Value::undetermined;
}

namespace {

// Smallest integer J >= 0 such that every root of P is below J
// (Cauchy bound), for P with a positive leading coefficient.
std::size_t cauchy_bound(const std::vector<Integer> &p) {
  std::size_t d = degree_of(p);
  if (d == 0)
    return 0;
  Rational m = 0;
  for (std::size_t i = 0; i < d; ++i) {
    Rational q(abs(p[i]), abs(p[d]));
    q.canonicalize();
    if (q > m)
      m = q;
  }
  return ceil(m).get_ui() + 1;
}

// First j in [from, to) where 1 <= f(j+1) <= 2 f(j) fails.
std::optional<std::size_t> ratio_failure(const GrowthFunction &f,
                                         std::size_t from, std::size_t to) {
  if (from >= to)
    return std::nullopt;
  Integer prev = f.at(from);
  for (std::size_t j = from; j < to; ++j) {
    Integer next = f.at(j + 1);
    if (next < 1 || next > 2 * prev)
      return j;
    prev = next;
  }
  return std::nullopt;
}

std::string ratio_reason(const GrowthFunction &f, std::size_t j) {
  return "ratio: f(" + std::to_string(j + 1) + ")=" + f.at(j + 1).get_str() +
         " violates 1 <= f(j+1) <= 2 f(j) with f(" + std::to_string(j) +
         ")=" + f.at(j).get_str();
}

// Ratio condition for all j >= from, or an undetermined marker.
enum class Tri { ok, fail, unknown };

Tri ratio_condition(const GrowthFunction &f, std::size_t from,
                    std::vector<std::string> &reasons) {
  using F = GrowthFunction::Family;
  switch (f.family()) {
  case F::polynomial: {
    auto q = taylor_shift(f.coefficients(), f.shift());
    std::size_t d = degree_of(q);
    if (q[d] < 0) {
      reasons.push_back("ratio: negative leading coefficient");
      return Tri::fail;
    }
    // D(j) = 2 Q(j) - Q(j+1) and Q(j+1) - 1 have positive leading
    // coefficients, so both are positive beyond their Cauchy bounds.
    auto q1 = taylor_shift(q, 1);
    std::vector<Integer> dpoly(q.size()), lpoly = q1;
    for (std::size_t i = 0; i < q.size(); ++i)
      dpoly[i] = 2 * q[i] - q1[i];
    lpoly[0] -= 1;
    std::size_t J = std::max(cauchy_bound(dpoly), cauchy_bound(lpoly));
    if (auto j = ratio_failure(f, from, std::max(from, J) + 1)) {
      reasons.push_back(ratio_reason(f, *j));
      return Tri::fail;
    }
    return Tri::ok;
  }
  case F::exponential: {
    const Rational &a = f.parameter();
    if (a <= 2)
      return Tri::ok;
    // (a-2) a^j eventually exceeds 2, so a failure exists; find it.
    for (std::size_t j = from;; ++j)
      if (auto bad = ratio_failure(f, j, j + 1)) {
        reasons.push_back(ratio_reason(f, *bad));
        return Tri::fail;
      }
  }
  case F::stretched: {
    // For t >= J with beta t^(beta-1) <= 69/100 < ln 2 the concavity of
    // t^beta gives exp((t+1)^beta) <= 2 exp(t^beta).
    const Integer a = f.parameter().get_num(), b = f.parameter().get_den();
    const unsigned long bu = b.get_ui();
    const Integer a100 = 100 * a, b69 = 69 * b, gap = b - a;
    const Integer rhs = pow(a100, bu), c = pow(b69, bu);
    std::size_t t = 1;
    while (pow(Integer(static_cast<unsigned long>(t)), gap.get_ui()) * c < rhs)
      ++t;
    std::size_t J = t > f.shift() ? t - f.shift() : 0;
    if (auto j = ratio_failure(f, from, std::max(from, J) + 1)) {
      reasons.push_back(ratio_reason(f, *j));
      return Tri::fail;
    }
    return Tri::ok;
  }
  case F::product: {
    const auto &w = f.weights();
    std::size_t end = w.preperiod() + w.period() + 1;
    for (std::size_t j = from; j < std::max(from, end) + 1; ++j)
      if (w.ratio(j + f.shift()) > 2) {
        reasons.push_back(ratio_reason(f, j));
        return Tri::fail;
      }
    return Tri::ok;
  }
  case F::tabulated: {
    const std::size_t size = f.values().size();
    std::size_t stop = f.tail() ? size : (size ? size - 1 : 0);
    if (auto j = ratio_failure(f, from, std::max(from, stop))) {
      reasons.push_back(ratio_reason(f, *j));
      return Tri::fail;
    }
    if (!f.tail()) {
      reasons.push_back("ratio: unknown beyond the table");
      return Tri::unknown;
    }
    return ratio_condition(*f.tail(), std::max(from, size), reasons);
  }
  }
  return Tri::unknown;
}

Tri summable(const GrowthFunction &f, std::vector<std::string> &reasons) {
  using F = GrowthFunction::Family;
  switch (f.family()) {
  case F::polynomial:
  case F::stretched:
    return Tri::ok;
  case F::exponential:
    if (f.parameter() < 2)
      return Tri::ok;
    reasons.push_back("sum: f(j)/2^j does not tend to 0 (alpha >= 2)");
    return Tri::fail;
  case F::product:
    reasons.push_back("sum: h(j) >= 2^j so sum f(j)/2^j diverges");
    return Tri::fail;
  case F::tabulated:
    if (!f.tail()) {
      reasons.push_back("sum: tabulated without tail, convergence undetermined");
      return Tri::unknown;
    }
    return summable(*f.tail(), reasons);
  }
  return Tri::unknown;
}

} // namespace

Acceptability is_acceptable(const GrowthFunction &f) {
  Acceptability out;
  std::vector<Tri> parts;
  bool has_zero = f.family() != GrowthFunction::Family::tabulated ||
                  !f.values().empty();
  if (!has_zero) {
    out.reasons.push_back("f(0): empty table");
    parts.push_back(Tri::unknown);
  } else if (f.at(0) != 1) {
    out.reasons.push_back("f(0)=" + f.at(0).get_str() + ", expected 1");
    parts.push_back(Tri::fail);
  }
  if (has_zero)
    parts.push_back(ratio_condition(f, 0, out.reasons));
  parts.push_back(summable(f, out.reasons));
  if (std::find(parts.begin(), parts.end(), Tri::fail) != parts.end())
    out.value = Verdict::Value::no;
  else if (std::find(parts.begin(), parts.end(), Tri::unknown) != parts.end())
    out.value = Verdict::Value::undetermined;
  else
    out.value = Verdict::Value::yes;
  return out;
}

std::optional<std::size_t> reliable_radius(const EdgeIndexedGraph &graph,
                                           VertexId base) {
  auto dist = edge_distances(graph, base);
  std::optional<std::size_t> out;
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    if (graph.vertex(v).frontier && dist[v] != kNone) {
      std::size_t r = dist[v] / 2;
      if (!out || r < *out)
        out = r;
    }
  return out;
}

namespace {

void require_depth(const EdgeIndexedGraph &graph, VertexId base,
                   std::size_t k_max) {
  if (auto r = reliable_radius(graph, base); r && k_max > *r)
    throw precondition_error("TruncationTooShallow",
                             "radius " + std::to_string(k_max) +
                                 " exceeds the reliable radius " +
                                 std::to_string(*r));
}

GrowthFunction running_max(const EdgeIndexedGraph &graph, VertexId base,
                           std::size_t k_max, std::vector<Integer> values,
                           bool v0_only) {
  require_depth(graph, base, k_max);
  auto dist = edge_distances(graph, base);
  std::vector<char> include(graph.vertex_count(), 1);
  if (v0_only)
    for (VertexId v = 0; v < graph.vertex_count(); ++v)
      include[v] = graph.vertex(v).part == Part::v0;
  return GrowthFunction::tabulated(kernels::ball_max_parallel(
      dist, values, include, static_cast<std::uint32_t>(k_max), 2));
}

std::vector<Integer> integral_values(const Ordering &ordering) {
  if (!ordering.is_integral())
    throw precondition_error("NonIntegralOrdering",
                             "stabilizer growth needs an integral ordering");
  std::vector<Integer> out;
  for (const auto &x : ordering.vertex_values())
    out.push_back(x.get_num());
  return out;
}

} // namespace

GrowthFunction ball_growth(const EdgeIndexedGraph &graph, VertexId base,
                           std::size_t k_max) {
  require_depth(graph, base, k_max);
  auto dist = edge_distances(graph, base);
  auto counts = kernels::ball_counts_parallel(
      dist, static_cast<std::uint32_t>(k_max), 2);
  std::vector<Integer> values;
  for (auto c : counts)
    values.emplace_back(static_cast<unsigned long>(c));
  return GrowthFunction::tabulated(std::move(values));
}

GrowthFunction stabilizer_growth(const EdgeIndexedGraph &graph,
                                 const Ordering &ordering, VertexId base,
                                 std::size_t k_max, bool v0_only) {
  return running_max(graph, base, k_max, integral_values(ordering), v0_only);
}

GrowthFunction stabilizer_growth(const FiniteGrouping &grouping, VertexId base,
                                 std::size_t k_max, bool v0_only) {
  std::vector<Integer> values;
  for (const auto &g : grouping.vertex_groups)
    values.push_back(g.order());
  return running_max(grouping.graph, base, k_max, std::move(values), v0_only);
}

Integer p_order(const Integer &N, const Integer &p) {
  if (!is_prime(p))
    throw precondition_error("NotPrime", p.get_str() + " is not prime");
  if (N < 1)
    throw precondition_error("NonPositive", "N must be >= 1");
  return p_part(N, p);
}

GrowthFunction p_stabilizer_growth(const EdgeIndexedGraph &graph,
                                   const Ordering &ordering, VertexId base,
                                   const Integer &p, std::size_t k_max,
                                   bool v0_only) {
  auto values = integral_values(ordering);
  for (auto &x : values)
    x = p_order(x, p);
  return running_max(graph, base, k_max, std::move(values), v0_only);
}

std::string to_string(Verdict::Value v) {
  switch (v) {
  case Verdict::Value::yes:
    return "yes";
  case Verdict::Value::no:
    return "no";
  case Verdict::Value::undetermined:
    return "undetermined";
  }
  return "";
}

Json growth_to_json(const GrowthFunction &f) {
  using F = GrowthFunction::Family;
  Json j;
  switch (f.family()) {
  case F::polynomial: {
    j["family"] = "polynomial";
    Json c = Json::array();
    for (const auto &x : f.coefficients())
      c.push_back(x.get_str());
    j["coefficients"] = std::move(c);
    break;
  }
  case F::exponential:
    j["family"] = "exponential";
    j["alpha"] = to_string(f.parameter());
    break;
  case F::stretched:
    j["family"] = "stretched";
    j["beta"] = to_string(f.parameter());
    break;
  case F::product: {
    const auto &s = f.weights().sequence();
    j["family"] = "product";
    j["n"] = s.n();
    j["s_prefix"] = s.prefix();
    j["s_period"] = s.period();
    break;
  }
  case F::tabulated: {
    j["family"] = "tabulated";
    Json v = Json::array();
    for (const auto &x : f.values())
      v.push_back(x.get_str());
    j["values"] = std::move(v);
    if (f.tail())
      j["tail"] = growth_to_json(*f.tail());
    return j;
  }
  }
  j["shift"] = f.shift();
  return j;
}

GrowthFunction growth_from_json(const Json &doc) {
  if (doc.is_string())
    return GrowthFunction::parse(doc.get<std::string>());
  if (!doc.is_object() || !doc.contains("family") ||
      !doc["family"].is_string())
    throw parse_error("growth function needs a 'family'");
  const auto family = doc["family"].get<std::string>();
  const std::size_t shift =
      doc.contains("shift") ? doc["shift"].get<std::size_t>() : 0;
  auto integer = [](const Json &x) {
    Integer z;
    if (x.is_number_integer())
      z = Integer(x.dump());
    else if (!x.is_string() || z.set_str(x.get<std::string>(), 10) != 0)
      throw parse_error("expected an integer, got " + x.dump());
    return z;
  };
  try {
    if (family == "polynomial") {
      std::vector<Integer> c;
      for (const auto &x : doc.at("coefficients"))
        c.push_back(integer(x));
      return GrowthFunction::polynomial(std::move(c), shift);
    }
    if (family == "exponential")
      return GrowthFunction::exponential(rational_from_json(doc.at("alpha")),
                                         shift);
    if (family == "stretched")
      return GrowthFunction::stretched(rational_from_json(doc.at("beta")),
                                       shift);
    if (family == "product") {
      AdmissibleSequence s(doc.at("n").get<std::uint64_t>(),
                           doc.at("s_prefix").get<std::vector<std::uint64_t>>(),
                           doc.at("s_period").get<std::vector<std::uint64_t>>());
      return GrowthFunction::product(s, shift);
    }
    if (family == "tabulated") {
      std::vector<Integer> v;
      for (const auto &x : doc.at("values"))
        v.push_back(integer(x));
      std::optional<GrowthFunction> tail;
      if (doc.contains("tail"))
        tail = growth_from_json(doc["tail"]);
      return GrowthFunction::tabulated(std::move(v), std::move(tail));
    }
  } catch (const nlohmann::json::exception &e) {
    throw parse_error(std::string("growth function: ") + e.what());
  }
  throw parse_error("unknown growth family '" + family + "'");
}

Json verdict_to_json(const Verdict &v) {
  Json j{{"value", to_string(v.value)},
         {"symbolic", v.symbolic},
         {"range", v.range},
         {"certificate", v.certificate}};
  if (v.witness)
    j["witness"] = {{"scale", v.witness->scale.get_str()},
                    {"shift", v.witness->shift}};
  return j;
}

Json equivalence_to_json(const Equivalence &e) {
  return {{"value", to_string(e.value())},
          {"forward", verdict_to_json(e.forward)},
          {"backward", verdict_to_json(e.backward)}};
}

} // namespace treelat
