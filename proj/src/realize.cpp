//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/realize.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace treelat {

namespace {

std::uint64_t to_u64(const Integer &z, const char *what) {
  if (z < 0 || !z.fits_ulong_p())
    throw precondition_error("TooLarge", std::string(what) +
                                             " does not fit in 64 bits");
  return z.get_ui();
}

struct StateLess {
  bool operator()(const std::pair<Rational, std::size_t> &a,
                  const std::pair<Rational, std::size_t> &b) const {
    if (a.second != b.second)
      return a.second < b.second;
    return cmp(a.first, b.first) < 0;
  }
};

// Greedy digits for levels j0+1, j0+2, ... starting from the scaled
// remainder x = rho_rest * h(j0). Stops when (x, phase) repeats, which it
// must: x keeps a bounded denominator and stays bounded once the digits
// can absorb it.
PeriodicSequence greedy_from(Rational x, std::size_t j0, const Weights &h,
                             std::uint64_t bound,
                             std::optional<std::size_t> skip,
                             std::size_t horizon) {
  std::vector<std::int64_t> digits;
  std::map<std::pair<Rational, std::size_t>, std::size_t, StateLess> seen;
  const std::size_t pre = h.preperiod();
  const std::size_t period = std::max<std::size_t>(h.period(), 1);
  // With every ratio >= 2 a scaled remainder above the bound can only grow.
  std::uint64_t min_ratio = h.ratio(pre);
  for (std::size_t i = pre; i < pre + period; ++i)
    min_ratio = std::min<std::uint64_t>(min_ratio, h.ratio(i));
  for (std::size_t j = j0 + 1;; ++j) {
    if (j - j0 > horizon)
      throw precondition_error(
          "DigitHorizonExceeded",
          "greedy remainder neither vanished nor cycled within " +
              std::to_string(horizon) + " levels (digit bound " +
              std::to_string(bound) + ")");
    if (j - 1 >= pre && (!skip || j > *skip)) {
      if (x == 0)
        return {digits, {}};
      if (min_ratio >= 2 && x > Rational(bound))
        throw precondition_error(
            "DigitHorizonExceeded",
            "greedy remainder diverges at level " + std::to_string(j - 1) +
                ": scaled remainder " + to_string(x) + " exceeds digit bound " +
                std::to_string(bound));
      auto key = std::make_pair(x, (j - 1 - pre) % period);
      auto [it, fresh] = seen.emplace(key, digits.size());
      if (!fresh) {
        const auto start = static_cast<std::ptrdiff_t>(it->second);
        return {{digits.begin(), digits.begin() + start},
                {digits.begin() + start, digits.end()}};
      }
    }
    const Rational t = x * Rational(h.ratio(j - 1));
    std::uint64_t e = 0;
    if (!(skip && j == *skip)) {
      const Integer fl = floor(t);
      e = fl >= bound ? bound : fl.get_ui();
    }
    x = t - Rational(e);
    x.canonicalize();
    digits.push_back(static_cast<std::int64_t>(e));
  }
}

void check_rho(const Rational &rho) {
  if (rho < 0)
    throw precondition_error("NegativeTarget",
                             "digit target " + to_string(rho) + " is negative");
}

std::uint64_t max_ratio(const Weights &h) {
  std::uint64_t r = 1;
  for (auto s : h.sequence().prefix())
    r = std::max(r, s - 1);
  for (auto s : h.sequence().period())
    r = std::max(r, s - 1);
  return r;
}

} // namespace

Rational DigitSequence::sum() const {
  auto c = [&](std::size_t j) {
    return j == 0 ? Rational(0) : Rational(digits.at(j - 1));
  };
  return weights->periodic_series(c, 1 + digits.prefix.size(),
                                  digits.period.size(), 1);
}

Rational DigitSequence::partial_sum(std::size_t d) const {
  Rational s = 0;
  Integer hj = 1;
  for (std::size_t j = 1; j <= d; ++j) {
    hj *= weights->ratio(j - 1);
    s += Rational(digits.at(j - 1)) / Rational(hj);
  }
  s.canonicalize();
  return s;
}

std::uint64_t default_digit_bound(const Weights &h, const Rational &rho,
                                  std::optional<std::size_t> skip) {
  const std::uint64_t n = h.n();
  const std::size_t first = skip && *skip == 1 ? 2 : 1;
  const Integer lead = ceil(rho * Rational(h.h(first))) + 1;
  return std::max({2 * (n - 1), (n - 1) * (n - 1) + n,
                   to_u64(lead, "digit bound")});
}

PeriodicSequence normalize(PeriodicSequence seq) {
  auto &per = seq.period;
  if (!per.empty()) {
    // Primitive root of the repeating block.
    const std::size_t len = per.size();
    for (std::size_t p = 1; p <= len; ++p) {
      if (len % p != 0)
        continue;
      bool repeats = true;
      for (std::size_t i = p; i < len && repeats; ++i)
        repeats = per[i] == per[i - p];
      if (repeats) {
        per.resize(p);
        break;
      }
    }
    if (std::all_of(per.begin(), per.end(), [](auto v) { return v == 0; }))
      per.clear();
  }
  if (!per.empty()) {
    while (!seq.prefix.empty() && seq.prefix.back() == per.back()) {
      seq.prefix.pop_back();
      std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
    }
  } else {
    while (!seq.prefix.empty() && seq.prefix.back() == 0)
      seq.prefix.pop_back();
  }
  return seq;
}

DigitSequence digit_sequence(const Rational &rho, const Weights &h,
                             std::uint64_t bound,
                             std::optional<std::size_t> skip,
                             std::size_t horizon) {
  check_rho(rho);
  if (bound < 1)
    throw precondition_error("InvalidBound", "digit bound must be >= 1");
  DigitSequence out;
  out.weights = std::make_shared<const Weights>(h);
  out.skip = skip;
  out.target = rho;
  out.target.canonicalize();
  out.bound = bound;
  out.digits = normalize(greedy_from(out.target, 0, h, bound, skip, horizon));
  return out;
}

Rational kappa0(const Weights &h) { return h.kappa0(); }

namespace {

void require_acceptable(const GrowthFunction &f) {
  const Acceptability a = is_acceptable(f);
  if (a.value == Verdict::Value::yes)
    return;
  std::string why;
  for (const auto &r : a.reasons)
    why += (why.empty() ? "" : "; ") + r;
  throw precondition_error("NotAcceptable",
                           f.describe() + " is not an acceptable growth "
                                          "function (" +
                               (why.empty() ? to_string(a.value) : why) + ")");
}

Realization realize_impl(Rational kappa,
                         const std::optional<GrowthFunction> &f,
                         const AdmissibleSequence &s, std::uint64_t m) {
  kappa.canonicalize();
  if (m < 3)
    throw precondition_error("InvalidDegree", "star trees need m >= 3");
  if (kappa <= 0)
    throw precondition_error("InvalidTarget", "covolume must be positive");
  if (auto v = s.violations(); !v.empty())
    throw precondition_error("NotAdmissible", v.front());
  if (s.max_entry() - 1 > m - 1)
    throw precondition_error(
        "BranchingTooLarge",
        "blocks branch into s_j - 1 = " + std::to_string(s.max_entry() - 1) +
            " children, more than m - 1 = " + std::to_string(m - 1));
  auto h = std::make_shared<const Weights>(s);

  Realization r;
  r.sequence = s;
  r.kappa = kappa;
  r.kappa0 = h->kappa0();
  r.f = f;

  Rational target = kappa;
  if (kappa <= r.kappa0) {
    if (!f)
      throw precondition_error("BelowKappa0",
                               "covolume " + to_string(kappa) +
                                   " must exceed kappa0 = " +
                                   to_string(r.kappa0) +
                                   "; compose with shrink_covolume");
    // Realize kappa |H| and divide by |H| through the tower.
    for (std::size_t k = 1;; ++k) {
      const Integer hk = h->h(k);
      if (!hk.fits_ulong_p())
        throw precondition_error("TooLarge",
                                 "no tower level gives enough units");
      const std::uint64_t units = totient(hk.get_ui());
      if (Rational(units) * kappa > r.kappa0) {
        r.tower_k = k;
        r.units = units;
        break;
      }
    }
    target = kappa * Rational(r.units);
    target.canonicalize();
  }
  r.spec_covolume = target;
  const Rational rho = target - r.kappa0;

  StarTreeSpec spec = build_star_ray(m);
  DigitRule rule;
  rule.weights = h;
  if (f) {
    require_acceptable(*f);
    std::size_t k = 1;
    for (;; ++k) {
      r.nu_upper = f->series_upper(*h, k, 0);
      if (r.nu_upper < rho)
        break;
      if (k > 4096)
        throw precondition_error("NoLevelFound",
                                 "no level k with nu_k < " + to_string(rho));
    }
    r.tf_level = k;
    spec = glue(std::move(spec), BlockShape::Tf(*f), k);
    r.nu_exact = f->series_exact(*h, k, 0);
    if (r.nu_exact) {
      const Rational rest = rho - *r.nu_exact;
      r.digit_bound = default_digit_bound(*h, rest, k);
      r.digits = digit_sequence(rest, *h, r.digit_bound, k);
      rule.kind = DigitRule::Kind::periodic;
      rule.digits = r.digits->digits;
    } else {
      r.digit_bound = default_digit_bound(*h, rho, k);
      rule.kind = DigitRule::Kind::compensating;
      rule.target = rho;
      rule.f = std::make_shared<const GrowthFunction>(*f);
    }
    rule.skip = k;
  } else {
    r.digit_bound = default_digit_bound(*h, rho);
    r.digits = digit_sequence(rho, *h, r.digit_bound);
    rule.digits = r.digits->digits;
  }
  rule.bound = r.digit_bound;
  spec.rule = rule;

  if (auto v = spec_violations(spec); !v.empty())
    throw precondition_error("RealizationInfeasible",
                             v.front() + " (m = " + std::to_string(m) + ")");
  if (auto exact = covolume_exact(spec, s, Selector{});
      exact && *exact != target)
    throw invariant_error("CovolumeMismatch",
                          "realized " + to_string(*exact) + ", wanted " +
                              to_string(target));
  r.spec = std::move(spec);
  return r;
}

} // namespace

Realization realize_covolume(const Rational &kappa, std::uint64_t m,
                             std::uint64_t n) {
  return realize_impl(kappa, std::nullopt, AdmissibleSequence::canonical(n),
                      m);
}

Realization realize_covolume_growth(const Rational &kappa,
                                    const GrowthFunction &f, std::uint64_t m,
                                    std::uint64_t n) {
  return realize_impl(kappa, f, AdmissibleSequence::canonical(n), m);
}

Realization realize_full(const Rational &kappa, const GrowthFunction &f,
                         const AdmissibleSequence &s, std::uint64_t m) {
  const std::uint64_t n = s.n();
  if (n <= 4 || is_prime(Integer(static_cast<unsigned long>(n))))
    throw precondition_error("InvalidDegree",
                             "n = " + std::to_string(n) +
                                 " must be composite and greater than 4");
  return realize_impl(kappa, f, s, m);
}

SemidirectTower build_semidirect_tower(std::uint64_t n, std::size_t k) {
  if (n < 3)
    throw precondition_error("InvalidDegree", "the tower needs n >= 3");
  if (k < 1)
    throw precondition_error("InvalidLevel", "the tower needs k >= 1");
  return SemidirectTower(Weights::canonical(n), k);
}

TowerReport verify_tower(const SemidirectTower &tower, std::size_t max_level) {
  TowerReport rep;
  rep.counts = kernels::tower_check_parallel(tower, max_level);
  rep.units = tower.unit_count();
  rep.faithful = true;
  const std::size_t k = tower.k();
  const SemidirectTower::Element one{1 % tower.modulus(), 0};
  for (auto u : tower.units()) {
    if (u == one.a)
      continue;
    const auto img = tower.act(k, u, one);
    rep.faithfulness.emplace_back(u, img.a);
    if (img == one)
      rep.faithful = false;
  }
  rep.faithful = rep.faithful && rep.counts.unfaithful_units == 0;
  return rep;
}

ShrinkResult shrink_covolume(const StarTreeSpec &spec,
                             const AdmissibleSequence &s, std::size_t k,
                             std::size_t depth) {
  if (k < 1)
    throw precondition_error("InvalidLevel", "the tower needs k >= 1");
  if (depth < k)
    throw precondition_error("TruncationTooShallow",
                             "depth " + std::to_string(depth) +
                                 " is below the tower level " +
                                 std::to_string(k));
  if (level_counts(spec, k)[k] == 0)
    throw precondition_error("NotFaithful",
                             "the spec has no vertex at level " +
                                 std::to_string(k) +
                                 ", so H does not act faithfully");
  const Weights h(s);
  auto tower = std::make_shared<const SemidirectTower>(h, k);
  Truncation t = truncate(spec, s, depth);
  const auto &g = t.graph;

  std::vector<Integer> hl(depth + 2);
  for (std::size_t l = 0; l < hl.size(); ++l)
    hl[l] = h.h(l);

  FiniteGrouping out;
  out.vertex_groups.resize(g.vertex_count());
  out.edge_groups.resize(g.edge_count());
  out.injections.resize(g.edge_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).part == Part::v0) {
      out.vertex_groups[v] = GroupDesc::semidirect(tower, t.level[v]);
      continue;
    }
    // A V1 vertex w next to center c with index i(e) has order
    // i(e) h(l(c)) |H|, that is G_{l(w)} x| H times Z/extra.
    const EdgeId e = g.incoming(v).front();
    const VertexId c = g.edge(e).origin;
    const Rational extra = Rational(g.edge(e).index) *
                           Rational(hl[t.level[c]]) /
                           Rational(hl[t.level[v]]);
    if (!is_integral(extra))
      throw invariant_error("InvalidIndexing",
                            "non-integral factor at " + g.vertex(v).id);
    out.vertex_groups[v] = GroupDesc::semidirect(
        tower, t.level[v], to_u64(extra.get_num(), "extra factor"));
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge &ed = g.edge(e);
    const bool into_center = g.vertex(ed.terminus).part == Part::v0;
    const VertexId c = into_center ? ed.terminus : ed.origin;
    out.edge_groups[e] = out.vertex_groups[c];
    Injection inj;
    if (into_center)
      inj.kind = Injection::Kind::identity;
    else if (t.level[c] < t.level[ed.terminus])
      inj.kind = Injection::Kind::tower_step;
    else
      inj.kind = Injection::Kind::first_factor;
    out.injections[e] = inj;
  }
  out.graph = g;

  ShrinkResult res{tower, std::move(t), std::move(out), std::nullopt, {}, 1};
  res.units = tower->unit_count();
  const Rational units(res.units);
  if (auto ex = covolume_exact(spec, s, Selector{})) {
    res.covolume = *ex / units;
    res.covolume->canonicalize();
  }
  auto iv = covolume(spec, s, Selector{}, depth).interval;
  res.interval = {iv.lo / units, iv.hi / units};
  res.interval.lo.canonicalize();
  res.interval.hi.canonicalize();
  return res;
}

std::vector<DigitSequence>
sample_digit_sequences(const Rational &rho, const Weights &h,
                       std::uint64_t bound, std::size_t count,
                       std::uint64_t seed, std::size_t random_levels) {
  check_rho(rho);
  std::mt19937_64 rng(seed);
  const Rational rho_c = [&] {
    Rational r = rho;
    r.canonicalize();
    return r;
  }();
  // Any scaled remainder up to cap can still be written with digits <= bound.
  const std::uint64_t rmax = max_ratio(h);
  const Rational cap =
      rmax > 1 ? make_rational(bound, rmax - 1) : Rational(bound) * 1024;
  if (rho * Rational(h.h(1)) > cap * Rational(h.ratio(0)) + Rational(bound))
    throw precondition_error("DigitBoundTooSmall",
                             "bound " + std::to_string(bound) +
                                 " cannot represent " + to_string(rho));

  std::vector<DigitSequence> out;
  std::set<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>>
      seen;
  const std::size_t max_attempts = 64 * count + 64;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count;
       ++attempt) {
    std::vector<std::int64_t> head;
    Rational x = rho_c;
    for (std::size_t j = 1; j <= random_levels; ++j) {
      const Rational t = x * Rational(h.ratio(j - 1));
      const Integer fl = floor(t);
      const std::uint64_t hi = fl >= bound ? bound : fl.get_ui();
      const Integer need = ceil(t - cap);
      const std::uint64_t lo = need > 0 ? need.get_ui() : 0;
      std::uniform_int_distribution<std::uint64_t> pick(lo, std::max(lo, hi));
      const std::uint64_t e = pick(rng);
      x = t - Rational(e);
      x.canonicalize();
      head.push_back(static_cast<std::int64_t>(e));
    }
    PeriodicSequence tail =
        greedy_from(x, random_levels, h, bound, {}, kDefaultDigitHorizon);
    PeriodicSequence full;
    full.prefix = head;
    full.prefix.insert(full.prefix.end(), tail.prefix.begin(),
                       tail.prefix.end());
    full.period = tail.period;
    full = normalize(std::move(full));
    if (!seen.emplace(full.prefix, full.period).second)
      continue;
    DigitSequence d;
    d.digits = std::move(full);
    d.weights = std::make_shared<const Weights>(h);
    d.target = rho_c;
    d.bound = bound;
    out.push_back(std::move(d));
  }
  if (out.size() < count)
    throw precondition_error("SamplerExhausted",
                             "found only " + std::to_string(out.size()) +
                                 " distinct sequences");
  return out;
}

Json digit_sequence_to_json(const DigitSequence &d) {
  Json j;
  j["prefix"] = d.digits.prefix;
  j["period"] = d.digits.period;
  j["notation"] = d.digits.notation();
  j["bound"] = d.bound;
  j["target"] = to_string(d.target);
  j["sum"] = to_string(d.sum());
  if (d.skip)
    j["skip"] = *d.skip;
  return j;
}

Json tower_report_to_json(const TowerReport &r) {
  Json j;
  j["units"] = r.units;
  j["faithful"] = r.faithful;
  j["ok"] = r.counts.ok();
  j["pairs_checked"] = r.counts.pairs_checked;
  j["iota_collisions"] = r.counts.iota_collisions;
  j["action_not_bijective"] = r.counts.action_not_bijective;
  j["action_not_additive"] = r.counts.action_not_additive;
  j["action_not_homomorphic"] = r.counts.action_not_homomorphic;
  j["equivariance_failures"] = r.counts.equivariance_failures;
  j["unfaithful_units"] = r.counts.unfaithful_units;
  Json cert = Json::array();
  for (auto [u, img] : r.faithfulness)
    cert.push_back({{"h", u}, {"g", 1}, {"image", img}});
  j["certificate"] = cert;
  return j;
}

Json realization_report(const Realization &r, std::size_t radius) {
  Json j;
  Json in;
  in["kappa"] = to_string(r.kappa);
  in["m"] = r.spec.m;
  in["n"] = r.sequence.n();
  in["sequence"] = sequence_to_json(r.sequence);
  if (r.f)
    in["f"] = growth_to_json(*r.f);
  j["inputs"] = in;
  j["kappa0"] = to_string(r.kappa0);
  j["spec_covolume"] = to_string(r.spec_covolume);
  if (r.tf_level) {
    j["k"] = *r.tf_level;
    j["nu_upper"] = to_string(r.nu_upper);
    if (r.nu_exact)
      j["nu"] = to_string(*r.nu_exact);
  }
  j["digit_bound"] = r.digit_bound;
  if (r.digits)
    j["digits"] = digit_sequence_to_json(*r.digits);
  else if (r.spec.rule) {
    auto e = r.spec.rule->digits_upto(radius);
    j["digits"] = {{"rule", "compensating"},
                   {"first", std::vector<std::uint64_t>(e.begin(), e.end())}};
  }

  const Rational units(r.units);
  auto rep = covolume(r.spec, r.sequence, Selector{}, 30);
  Json cov;
  if (rep.exact) {
    Rational c = *rep.exact / units;
    c.canonicalize();
    cov["exact"] = to_string(c);
    cov["numerator"] = c.get_num().get_str();
    cov["denominator"] = c.get_den().get_str();
  }
  Rational lo = rep.interval.lo / units, hi = rep.interval.hi / units;
  lo.canonicalize();
  hi.canonicalize();
  cov["interval"] = {to_string(lo), to_string(hi)};
  cov["depth"] = rep.depth;
  j["covolume"] = cov;

  const auto ball = ball_growth_levels(r.spec, radius);
  Json growth;
  growth["ball"] = Json::array();
  for (const auto &b : ball)
    growth["ball"].push_back(b.get_str());
  if (r.f) {
    CompareOptions opt;
    opt.range = radius;
    opt.max_shift = std::min<std::size_t>(opt.max_shift, radius / 2);
    growth["versus_f"] =
        equivalence_to_json(equivalent(GrowthFunction::tabulated(ball), *r.f,
                                       opt));
  }
  if (!r.sequence.is_canonical()) {
    auto stab = stabilizer_growth_levels(r.spec, r.sequence, radius, true);
    growth["stabilizer"] = Json::array();
    for (const auto &b : stab)
      growth["stabilizer"].push_back(b.get_str());
  }
  j["growth"] = growth;

  if (r.tower_k) {
    Json t;
    t["k"] = *r.tower_k;
    t["units"] = r.units.get_str();
    const SemidirectTower tower(Weights(r.sequence), *r.tower_k);
    if (tower.modulus() <= 4096)
      t["verification"] = tower_report_to_json(verify_tower(tower, *r.tower_k + 1));
    j["tower"] = t;
  }
  return j;
}

} // namespace treelat
