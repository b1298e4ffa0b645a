//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "cover_checks.hpp"
#include "treelat/realize.hpp"

using namespace treelat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A criterion returns an empty string on success, or the first failure.
struct Criterion {
  int id;
  std::string title;
  std::function<std::string(std::ostringstream &)> body;
};

std::string c1(std::ostringstream &note) {
  auto t0 = Clock::now();
  for (std::uint64_t n = 3; n <= 10; ++n) {
    auto v = covolume_exact(build_star_ray(std::max<std::uint64_t>(n, 3)),
                            AdmissibleSequence::canonical(n), Selector{});
    if (!v || *v != Rational(n - 1, n - 2))
      return "n = " + std::to_string(n) + " gave " +
             (v ? to_string(*v) : "no exact value");
  }
  if (*covolume_exact(build_star_ray(4), AdmissibleSequence::canonical(3),
                      Selector{}) != 2)
    return "n = 3 is not 2";
  const double s = seconds_since(t0);
  note << "n=3..10 exact, " << s << " s";
  return s < 1.0 ? "" : "runtime " + std::to_string(s) + " s";
}

std::string c2(std::ostringstream &note) {
  auto t = canonical_indexing(build_star_ray(4), 3, 7);
  const auto &g = t.graph;
  auto o = compute_ordering(g, g.vertex_by_id("v0"), 1);
  // Along the spine: center, joint, center, ... = 1,2,2,4,4,8,...
  std::vector<Rational> spine, expect;
  Integer p = 1;
  for (std::size_t l = 0; l < 6; ++l) {
    spine.push_back(o.vertex(g.vertex_by_id("v" + std::to_string(l))));
    expect.push_back(Rational(p));
    p *= 2;
    spine.push_back(o.vertex(g.vertex_by_id("w_v" + std::to_string(l + 1))));
    expect.push_back(Rational(p));
  }
  if (spine != expect)
    return "spine values differ";
  // Leaves: three at the base, two at every later star, value 3 * 2^l.
  for (std::size_t l = 0; l < 6; ++l) {
    const std::string c = "v" + std::to_string(l);
    const auto cv = g.vertex_by_id(c);
    std::size_t leaves = 0;
    for (auto e : g.outgoing(cv)) {
      const auto w = g.edge(e).terminus;
      if (g.vertex(w).id.rfind(c + "_l", 0) != 0)
        continue;
      ++leaves;
      if (o.vertex(w) != Rational(3) * o.vertex(cv))
        return "leaf value at " + g.vertex(w).id;
      if (o.edge(e) != o.vertex(cv))
        return "edge label at " + g.vertex(w).id;
    }
    if (leaves != (l == 0 ? 3u : 2u))
      return "leaf count at " + c;
  }
  note << "1,2,2,4,4,8,... and leaves 3,3,3,6,6,12,12,... through 6 stars";
  return "";
}

std::string ball_check(const EdgeIndexedGraph &g, VertexId base,
                       std::int64_t m, std::int64_t n) {
  auto ball = universal_cover_ball(g, base, 6);
  auto deg = ball.degrees();
  for (std::uint32_t i = 0; i < ball.nodes.size(); ++i) {
    const auto &node = ball.nodes[i];
    if (node.depth >= ball.radius || node.truncated)
      continue;
    const bool v0 = g.vertex(node.projection).part == Part::v0;
    if (deg[i] != static_cast<std::uint32_t>(v0 ? m : n))
      return "degree " + std::to_string(deg[i]) + " at a lift of " +
             g.vertex(node.projection).id;
  }
  return "";
}

std::string c3(std::ostringstream &note) {
  auto t0 = Clock::now();
  std::size_t checked = 0;
  const std::pair<std::uint64_t, std::uint64_t> mn[] = {
      {3, 3}, {4, 3}, {4, 6}, {5, 6}};
  for (auto [m, n] : mn) {
    auto spec = build_star_ray(m);
    std::vector<AdmissibleSequence> seqs{AdmissibleSequence::canonical(n)};
    if (n == 6)
      seqs.emplace_back(6, std::vector<std::uint64_t>{},
                        std::vector<std::uint64_t>{3, 6});
    for (const auto &s : seqs) {
      auto t = admissible_indexing(spec, s, 8);
      if (auto e = ball_check(t.graph, t.base, m, n); !e.empty())
        return e;
      ++checked;
    }
  }
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t n = 3 + rng() % 4;
    const std::uint64_t m = n + rng() % 2;
    auto spec = build_star_ray(m);
    for (std::size_t level = 1; level <= 3; ++level) {
      const auto p = 1 + rng() % 3;
      spec = glue(spec, build_Bp(p, m, 1 + rng() % (m - 1)), level);
    }
    auto t = canonical_indexing(spec, n, 7);
    if (auto e = ball_check(t.graph, t.base, m, n); !e.empty())
      return "random spec " + std::to_string(i) + ": " + e;
    ++checked;
  }
  const double s = seconds_since(t0);
  note << checked << " indexings, radius 6, " << s << " s";
  return s < 10.0 ? "" : "runtime " + std::to_string(s) + " s";
}

std::string c4(std::ostringstream &note) {
  std::mt19937_64 rng(404);
  int done = 0;
  while (done < 50) {
    auto base = random_unimodular_graph(rng, 8, true);
    const auto mode = done % 2 ? CoverMode::topological : CoverMode::group;
    if (mode == CoverMode::topological && is_tree(base))
      continue;
    const std::int64_t d = 2 + static_cast<std::int64_t>(rng() % 3);
    auto cover = build_index_cover(base, d, mode);
    auto f = testing::check_cover(cover);
    if (!f.empty())
      return "cover " + std::to_string(done) + ": " + f.front();
    if (cover_degree(cover) != d)
      return "degree mismatch";
    ++done;
  }
  note << "50 covers, both modes, p in {2,3,5}";
  return "";
}

std::string c5(std::ostringstream &note) {
  std::mt19937_64 rng(55);
  const std::uint64_t ns[] = {3, 4, 6};
  for (int i = 0; i < 25; ++i) {
    const std::uint64_t n = ns[i % 3];
    const std::uint64_t m = std::max<std::uint64_t>(n, 4);
    const Rational k0(n - 1, n - 2);
    const long q = static_cast<long>(1 + rng() % 12);
    const long p = static_cast<long>(1 + rng() % (10 * q));
    const Rational kappa = k0 + make_rational(p, q);
    auto r = realize_covolume(kappa, m, n);
    auto exact = covolume_exact(r.spec, r.sequence, Selector{});
    if (!exact || *exact != kappa)
      return "kappa " + to_string(kappa) + " not realized exactly";
    auto rep = covolume(r.spec, r.sequence, Selector{}, 30);
    for (std::size_t d : {30, 35, 45})
      if (!rep.interval.contains(
              partial_covolume(r.spec, r.sequence, Selector{}, d)))
        return "partial sum at depth " + std::to_string(d) +
               " outside the interval";
    if (!rep.interval.contains(kappa))
      return "interval misses kappa";
  }
  note << "25 targets, n in {3,4,6}";
  return "";
}

std::string c6(std::ostringstream &note) {
  int cases = 0;
  for (std::uint64_t n : {3, 4}) {
    const std::uint64_t m = 4;
    auto s = AdmissibleSequence::canonical(n);
    auto base = build_star_ray(m);
    const Rational before = *covolume_exact(base, s, Selector{});
    for (std::uint64_t p : {1, 2, 3})
      for (std::size_t j : {1, 3}) {
        auto glued = glue(base, build_Bp(p, m, n - 1), j);
        if (*covolume_exact(glued, s, Selector{}) - before !=
            Rational(p) / Rational(pow(Integer(n - 1), j)))
          return "B_" + std::to_string(p) + " at level " + std::to_string(j);
        ++cases;
      }
  }
  AdmissibleSequence s(6, {}, {3, 6});
  Weights h(s);
  auto base = build_star_ray(6);
  const Rational before = *covolume_exact(base, s, Selector{});
  for (std::uint64_t p : {1, 2})
    for (std::size_t q : {1, 2, 3, 4}) {
      auto glued = glue(base, build_Bpq(p, q, h, 6), q);
      if (*covolume_exact(glued, s, Selector{}) - before !=
          Rational(p) / Rational(h.h(q)))
        return "B_{" + std::to_string(p) + "," + std::to_string(q) + "}";
      ++cases;
    }
  note << cases << " cases";
  return cases == 20 ? "" : "case count " + std::to_string(cases);
}

std::string c7(std::ostringstream &note) {
  auto t0 = Clock::now();
  for (std::uint64_t n : {3, 4, 5})
    for (std::size_t k : {1, 2, 3}) {
      auto tower = build_semidirect_tower(n, k);
      auto rep = verify_tower(tower, k + 1);
      if (!rep.counts.ok() || !rep.faithful)
        return "tower n=" + std::to_string(n) + " k=" + std::to_string(k);
      auto sh = shrink_covolume(build_star_ray(4),
                                AdmissibleSequence::canonical(n), k, k + 1);
      if (!sh.covolume ||
          *sh.covolume != Rational(n - 1, n - 2) / Rational(rep.units))
        return "shrunk covolume n=" + std::to_string(n);
    }
  auto sh = shrink_covolume(build_star_ray(4), AdmissibleSequence::canonical(4),
                            2, 3);
  if (*sh.covolume != Rational(1, 4))
    return "n=4, k=2 gave " + to_string(*sh.covolume);
  const double s = seconds_since(t0);
  note << "n=4,k=2 -> 1/4, " << s << " s";
  return s < 30.0 ? "" : "runtime " + std::to_string(s) + " s";
}

std::string c8(std::ostringstream &note) {
  AdmissibleSequence s(6, {}, {3, 6});
  Weights h(s);
  auto t = admissible_indexing(build_star_ray(6), s, 13);
  auto g = stabilizer_growth(t.graph, compute_ordering(t.graph, t.base), t.base,
                             12, true);
  for (std::size_t k = 0; k <= 12; ++k)
    if (g.values()[k] != h.h(k))
      return "stabilizer growth at k=" + std::to_string(k);
  auto f = GrowthFunction::product(s);
  auto other = GrowthFunction::product(AdmissibleSequence::canonical(6));
  if (equivalent(f, other).value() != Verdict::Value::no)
    return "(3,6) and (6) envelopes not separated";
  if (equivalent(f, GrowthFunction::product(AdmissibleSequence(6, {}, {6, 3})))
          .value() != Verdict::Value::yes)
    return "(3,6) and (6,3) should be equivalent";
  note << "h(k) exact for k<=12; lambda^2=10 vs lambda=5 inequivalent";
  return "";
}

std::string c9(std::ostringstream &note) {
  const GrowthFunction fs[] = {GrowthFunction::exponential(Rational(3, 2)),
                               GrowthFunction::exponential(Rational(7, 4))};
  CompareOptions opt;
  opt.range = 20;
  opt.max_shift = 10;
  for (const auto &f : fs) {
    auto r = realize_covolume_growth(4, f, 4, 4);
    auto ball = GrowthFunction::tabulated(ball_growth_levels(r.spec, 20));
    auto eq = equivalent(ball, f, opt);
    if (eq.value() != Verdict::Value::yes || !eq.forward.witness ||
        !eq.backward.witness)
      return "ball growth vs " + f.describe() + ": " + eq.forward.certificate +
             " / " + eq.backward.certificate;
    note << f.describe() << ": k=" << *r.tf_level << " witnesses (c="
         << eq.forward.witness->scale << ",s=" << eq.forward.witness->shift
         << ")/(c=" << eq.backward.witness->scale
         << ",s=" << eq.backward.witness->shift << "); ";
    // The digits compensate T_f level by level; the covolume is the limit
    // of the partial sums. Check the enclosures tighten around kappa.
    Rational prev;
    for (std::size_t d : {20, 40, 60}) {
      auto rep = covolume(r.spec, r.sequence, Selector{}, d);
      if (!rep.interval.contains(4))
        return "interval at depth " + std::to_string(d) + " misses 4";
      if (d > 20 && !(rep.interval.width() < prev))
        return "interval does not shrink";
      prev = rep.interval.width();
    }
  }
  if (equivalent(fs[0], fs[1]).value() != Verdict::Value::no)
    return "3/2 and 7/4 envelopes not separated";
  note << "envelopes 3/2 vs 7/4 inequivalent";
  return "";
}

std::string c10(std::ostringstream &note) {
  const Rational kappa(3);
  const std::uint64_t n = 3, m = 4;
  Weights h = Weights::canonical(n);
  const Rational rho = kappa - h.kappa0();
  auto list =
      sample_digit_sequences(rho, h, default_digit_bound(h, rho), 100, 1234);
  std::set<std::string> seen;
  for (const auto &d : list) {
    auto spec = build_star_ray(m);
    DigitRule rule;
    rule.digits = d.digits;
    rule.weights = d.weights;
    rule.bound = d.bound;
    spec.rule = rule;
    auto c = covolume_exact(spec, h.sequence(), Selector{});
    if (!c || *c != kappa)
      return "sequence " + d.digits.notation() + " misses kappa";
    seen.insert(d.digits.notation());
  }
  if (list.size() != 100 || seen.size() != 100)
    return "sequences are not pairwise distinct";
  note << "100 distinct sequences with covolume 3 (class distinctness not "
          "checked)";
  return "";
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "star-ray covolume (n-1)/(n-2)", c1},
      {2, "star-ray ordering values", c2},
      {3, "biregular universal covers", c3},
      {4, "cover degree, volume and divisibility", c4},
      {5, "covolume realization", c5},
      {6, "gluing additivity", c6},
      {7, "semidirect tower and shrinking", c7},
      {8, "stabilizer growth for s = (3,6)", c8},
      {9, "quotient growth realization", c9},
      {10, "seeded digit-sequence sampler", c10},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    std::ostringstream note;
    std::string err;
    try {
      err = c.body(note);
    } catch (const std::exception &e) {
      err = std::string("exception: ") + e.what();
    }
    if (err.empty())
      std::cout << "PASS criterion " << c.id << ": " << c.title << " ("
                << note.str() << ")\n";
    else {
      ++failed;
      std::cout << "FAIL criterion " << c.id << ": " << c.title << ": " << err
                << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}
