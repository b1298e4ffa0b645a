//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/star_tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace treelat {

BlockShape BlockShape::ray() { return {}; }

BlockShape BlockShape::explicit_counts(std::vector<Integer> counts) {
  BlockShape b;
  b.kind = Kind::counts;
  b.level_counts = std::move(counts);
  return b;
}

BlockShape BlockShape::Bp(std::uint64_t p, std::uint64_t branching) {
  BlockShape b;
  b.kind = Kind::Bp;
  b.p = p;
  b.branching = branching;
  return b;
}

BlockShape BlockShape::Bpq(std::uint64_t p, std::size_t q, const Weights &h) {
  BlockShape b;
  b.kind = Kind::Bpq;
  b.p = p;
  b.q = q;
  b.weights = std::make_shared<const Weights>(h);
  return b;
}

BlockShape BlockShape::Tf(const GrowthFunction &f) {
  BlockShape b;
  b.kind = Kind::Tf;
  b.f = std::make_shared<const GrowthFunction>(f);
  return b;
}

std::optional<std::size_t> BlockShape::levels() const {
  switch (kind) {
  case Kind::ray:
  case Kind::Tf:
    return std::nullopt;
  case Kind::counts:
    return level_counts.size();
  case Kind::Bp:
  case Kind::Bpq:
    return p;
  }
  return std::nullopt;
}

Integer BlockShape::count(std::size_t i) const {
  switch (kind) {
  case Kind::ray:
    return 1;
  case Kind::counts:
    return i < level_counts.size() ? level_counts[i] : Integer(0);
  case Kind::Bp:
    return i < p ? pow(Integer(static_cast<unsigned long>(branching)), i)
                 : Integer(0);
  case Kind::Bpq: {
    if (i >= p)
      return 0;
    Integer c = 1;
    for (std::size_t t = 0; t < i; ++t)
      c *= weights->ratio(q + t);
    return c;
  }
  case Kind::Tf:
    return f->at(i);
  }
  return 0;
}

std::string BlockShape::describe() const {
  switch (kind) {
  case Kind::ray:
    return "R";
  case Kind::counts: {
    std::string s = "counts(";
    for (std::size_t i = 0; i < level_counts.size(); ++i)
      s += (i ? "," : "") + level_counts[i].get_str();
    return s + ")";
  }
  case Kind::Bp:
    return "B_" + std::to_string(p) + "(b=" + std::to_string(branching) + ")";
  case Kind::Bpq:
    return "B_{" + std::to_string(p) + "," + std::to_string(q) + "}";
  case Kind::Tf:
    return "T_f(" + f->describe() + ")";
  }
  return "";
}

std::vector<std::uint64_t> DigitRule::digits_upto(std::size_t levels) const {
  std::vector<std::uint64_t> out;
  out.reserve(levels);
  if (kind == Kind::periodic) {
    for (std::size_t i = 0; i < levels; ++i)
      out.push_back(static_cast<std::uint64_t>(digits.at(i)));
    return out;
  }
  // Compensating rule. R is the mass still owed after level j, U(j) an
  // upper bound for the part of T_f beyond level j. Each digit is the
  // largest value keeping R >= U; since U tends to the true tail of T_f,
  // the digits and T_f together converge to `target`.
  const Weights &h = *weights;
  const std::size_t k = *skip;
  auto upper_after = [&](std::size_t j) {
    std::size_t start = j + 1 > k ? j + 1 - k : 0;
    return f->series_upper(h, k, start);
  };
  Rational R = target;
  Integer hj = 1;
  for (std::size_t j = 1; j <= levels; ++j) {
    hj *= h.ratio(j - 1);
    Rational tf = j >= k ? Rational(f->at(j - k)) / Rational(hj) : Rational(0);
    std::uint64_t e = 0;
    if (j != k) {
      Rational room = (R - tf - upper_after(j)) * Rational(hj);
      Integer fl = floor(room);
      if (fl > 0)
        e = fl >= bound ? bound : fl.get_ui();
    }
    R -= Rational(e) / Rational(hj) + tf;
    R.canonicalize();
    out.push_back(e);
  }
  return out;
}

std::uint64_t DigitRule::max_digit() const {
  if (kind == Kind::compensating)
    return bound;
  std::int64_t m = 0;
  for (auto v : digits.prefix)
    m = std::max(m, v);
  for (auto v : digits.period)
    m = std::max(m, v);
  return static_cast<std::uint64_t>(m);
}

bool StarTreeSpec::infinite() const {
  if (!spine.levels() || rule)
    return true;
  return std::any_of(gluings.begin(), gluings.end(),
                     [](const Gluing &g) { return !g.block.levels(); });
}

StarTreeSpec build_star_ray(std::uint64_t m) {
  if (m < 3)
    throw precondition_error("InvalidDegree", "star trees need m >= 3");
  StarTreeSpec s;
  s.m = m;
  return s;
}

StarTreeSpec build_single_star(std::uint64_t m) {
  auto s = build_star_ray(m);
  s.spine = BlockShape::star();
  return s;
}

BlockShape build_Bp(std::uint64_t p, std::uint64_t m, std::uint64_t b) {
  if (p < 1)
    throw precondition_error("InvalidBlock", "B_p needs p >= 1");
  if (m < 3)
    throw precondition_error("InvalidDegree", "star trees need m >= 3");
  if (b < 1 || b > m - 1)
    throw precondition_error("BranchingTooLarge",
                             "branching " + std::to_string(b) +
                                 " exceeds m - 1 = " + std::to_string(m - 1));
  return BlockShape::Bp(p, b);
}

BlockShape build_Bpq(std::uint64_t p, std::size_t q, const Weights &h,
                     std::uint64_t m) {
  if (p < 1)
    throw precondition_error("InvalidBlock", "B_{p,q} needs p >= 1");
  for (std::size_t i = 0; i + 1 < p; ++i)
    if (h.ratio(q + i) > m - 1)
      throw precondition_error(
          "BranchingTooLarge",
          "s_" + std::to_string(q + i + 1) + " - 1 = " +
              std::to_string(h.ratio(q + i)) + " exceeds m - 1 = " +
              std::to_string(m - 1));
  return BlockShape::Bpq(p, q, h);
}

StarTreeSpec build_Tf(const GrowthFunction &f, std::uint64_t m) {
  auto acc = is_acceptable(f);
  if (acc.value != Verdict::Value::yes) {
    std::string why = acc.reasons.empty() ? "undetermined" : acc.reasons[0];
    throw precondition_error("NotAcceptable", f.describe() + ": " + why);
  }
  auto s = build_star_ray(m);
  s.spine = BlockShape::Tf(f);
  // f(j+1) <= 2 f(j) <= (m-1) f(j), so every level fits.
  return s;
}

Integer spine_free_slots(const StarTreeSpec &spec, std::size_t level) {
  Integer here = spec.spine.count(level), next = spec.spine.count(level + 1);
  Integer slots = here * (spec.m - 1) - next;
  if (level == 0)
    slots += 1;
  return slots;
}

namespace {

// Blocks rooted at absolute levels: the spine, explicit gluings in list
// order, then the rule's blocks by level.
struct Source {
  BlockShape block;
  std::size_t root = 0;
  std::string prefix;
  bool spine = false;
};

std::vector<Source> sources_upto(const StarTreeSpec &spec,
                                 std::size_t max_level) {
  std::vector<Source> out;
  out.push_back({spec.spine, 0, "v", true});
  for (std::size_t g = 0; g < spec.gluings.size(); ++g)
    if (spec.gluings[g].level <= max_level)
      out.push_back({spec.gluings[g].block, spec.gluings[g].level,
                     "g" + std::to_string(g) + "_", false});
  if (spec.rule && max_level >= 1) {
    auto e = spec.rule->digits_upto(max_level);
    for (std::size_t j = 1; j <= max_level; ++j)
      if (e[j - 1] > 0)
        out.push_back({BlockShape::Bpq(e[j - 1], j, *spec.rule->weights), j,
                       "d" + std::to_string(j) + "_", false});
  }
  return out;
}

std::size_t gluings_at(const StarTreeSpec &spec, std::size_t level,
                       const std::vector<std::uint64_t> &digits) {
  std::size_t used = 0;
  for (const auto &g : spec.gluings)
    used += g.level == level;
  if (level >= 1 && level <= digits.size() && digits[level - 1] > 0)
    ++used;
  return used;
}

void block_violations(const BlockShape &b, std::uint64_t m, std::size_t depth,
                      const std::string &name, bool is_spine,
                      std::vector<std::string> &out) {
  std::size_t last = depth;
  if (auto lv = b.levels())
    last = std::min(last, *lv);
  if (b.levels() && *b.levels() == 0) {
    out.push_back(name + ": block has no levels");
    return;
  }
  Integer prev = b.count(0);
  if (prev != 1)
    out.push_back(name + ": expected one center at the root level");
  for (std::size_t i = 1; i <= last; ++i) {
    Integer c = b.count(i);
    bool inside = !b.levels() || i < *b.levels();
    if (inside && c < 1) {
      out.push_back(name + ": no centers at level " + std::to_string(i));
      return;
    }
    Integer cap = prev * (m - 1) + ((is_spine && i == 1) ? 1 : 0);
    if (c > cap) {
      out.push_back(name + ": " + c.get_str() + " centers at level " +
                    std::to_string(i) + " exceed the " + cap.get_str() +
                    " free slots above");
      return;
    }
    prev = c;
  }
}

} // namespace

std::vector<std::string> spec_violations(const StarTreeSpec &spec,
                                         std::size_t depth) {
  std::vector<std::string> out;
  if (spec.m < 3) {
    out.push_back("m must be at least 3");
    return out;
  }
  block_violations(spec.spine, spec.m, depth, "spine", true, out);
  for (std::size_t g = 0; g < spec.gluings.size(); ++g) {
    const auto &gl = spec.gluings[g];
    const std::string name = "gluing " + std::to_string(g);
    block_violations(gl.block, spec.m, depth, name, false, out);
    if (gl.level < 1)
      out.push_back(name + ": level must be >= 1");
    else if (spec.spine.count(gl.level - 1) < 1)
      out.push_back(name + ": spine has no center at level " +
                    std::to_string(gl.level - 1));
  }
  std::vector<std::uint64_t> digits;
  if (spec.rule) {
    const auto &r = *spec.rule;
    if (!r.weights)
      out.push_back("digit rule without weights");
    else if (r.weights->sequence().max_entry() - 1 > spec.m - 1)
      out.push_back("digit rule branching exceeds m - 1");
    if (r.kind == DigitRule::Kind::compensating && (!r.f || !r.skip))
      out.push_back("compensating rule needs f and a skip level");
    if (!out.empty())
      return out;
    digits = r.digits_upto(depth + 1);
    if (r.skip && *r.skip >= 1 && *r.skip <= digits.size() &&
        digits[*r.skip - 1] != 0)
      out.push_back("digit at the reserved level " + std::to_string(*r.skip) +
                    " must be 0");
  }
  std::size_t top = depth + 1;
  for (const auto &g : spec.gluings)
    top = std::max(top, g.level);
  for (std::size_t q = 1; q <= top; ++q) {
    std::size_t used = gluings_at(spec, q, digits);
    if (used > 0 && Integer(static_cast<unsigned long>(used)) >
                        spine_free_slots(spec, q - 1))
      out.push_back("level " + std::to_string(q) + ": " +
                    std::to_string(used) + " gluings but only " +
                    spine_free_slots(spec, q - 1).get_str() + " free sites");
  }
  return out;
}

StarTreeSpec glue(StarTreeSpec spec, const BlockShape &block,
                  std::size_t level) {
  if (level < 1)
    throw precondition_error("NoFreeSite", "blocks glue at level >= 1");
  std::vector<std::uint64_t> digits;
  if (spec.rule)
    digits = spec.rule->digits_upto(level);
  Integer free = spine_free_slots(spec, level - 1);
  if (spec.spine.count(level - 1) < 1 ||
      Integer(static_cast<unsigned long>(gluings_at(spec, level, digits))) >=
          free)
    throw precondition_error("NoFreeSite", "no free site at level " +
                                               std::to_string(level));
  spec.gluings.push_back({block, level});
  std::vector<std::string> problems;
  block_violations(block, spec.m, 64, "block", false, problems);
  if (!problems.empty())
    throw precondition_error("BranchingTooLarge", problems.front());
  return spec;
}

std::vector<Integer> level_counts(const StarTreeSpec &spec,
                                  std::size_t depth) {
  std::vector<Integer> L(depth + 1, 0);
  for (const auto &src : sources_upto(spec, depth))
    for (std::size_t l = src.root; l <= depth; ++l) {
      if (auto lv = src.block.levels(); lv && l - src.root >= *lv)
        break;
      L[l] += src.block.count(l - src.root);
    }
  return L;
}

} // namespace treelat

namespace treelat {

namespace {

struct Center {
  VertexId vertex = 0;
  std::string id;
  std::uint64_t used = 0;
  std::uint64_t capacity = 0;
};

std::string center_id(const Source &src, std::size_t level, std::size_t t) {
  if (src.spine)
    return "v" + std::to_string(level) +
           (t == 0 ? std::string() : "_" + std::to_string(t));
  return src.prefix + std::to_string(level - src.root) + "_" +
         std::to_string(t);
}

} // namespace

Truncation truncate(const StarTreeSpec &spec, const AdmissibleSequence &s,
                    std::size_t depth, std::uint64_t max_vertices) {
  if (auto v = spec_violations(spec, depth); !v.empty())
    throw invariant_error("InvalidSpec", v.front());
  const std::int64_t n = static_cast<std::int64_t>(s.n());
  const std::uint64_t m = spec.m;
  GraphBuilder gb;
  Truncation t;
  t.depth = depth;
  std::vector<Center> centers;
  auto guard = [&] {
    if (gb.vertex_count() > max_vertices)
      throw precondition_error("TruncationTooLarge",
                               "more than " + std::to_string(max_vertices) +
                                   " vertices at depth " +
                                   std::to_string(depth));
  };
  // Adds a child center (or, past the depth, a frontier joint) below
  // center `parent` at level `level`.
  auto add_child = [&](std::uint32_t parent, const std::string &id,
                       std::size_t level) -> std::uint32_t {
    const auto r = static_cast<std::int64_t>(s.r(level));
    Center &p = centers[parent];
    ++p.used;
    const bool frontier = level > depth;
    VertexId w = gb.add_vertex("w_" + id, Part::v1, frontier);
    t.level.push_back(level);
    gb.add_edge_pair(p.vertex, w, n - r, 1);
    if (frontier) {
      guard();
      return kNone;
    }
    VertexId c = gb.add_vertex(id, Part::v0);
    t.level.push_back(level);
    gb.add_edge_pair(c, w, r, 1);
    centers.push_back({c, id, 1, m});
    guard();
    return static_cast<std::uint32_t>(centers.size() - 1);
  };

  auto sources = sources_upto(spec, depth + 1);
  std::vector<std::vector<std::uint32_t>> prev(sources.size());
  for (std::size_t level = 0; level <= depth + 1; ++level) {
    std::vector<std::vector<std::uint32_t>> cur(sources.size());
    for (std::size_t si = 0; si < sources.size(); ++si) {
      const Source &src = sources[si];
      if (level < src.root)
        continue;
      const std::size_t i = level - src.root;
      if (auto lv = src.block.levels(); lv && i >= *lv)
        continue;
      Integer count = src.block.count(i);
      if (count > max_vertices)
        throw precondition_error("TruncationTooLarge",
                                 count.get_str() + " centers at level " +
                                     std::to_string(level));
      std::uint64_t remaining = count.get_ui();
      if (i == 0) {
        if (src.spine) {
          VertexId c = gb.add_vertex(center_id(src, 0, 0), Part::v0);
          t.level.push_back(0);
          centers.push_back({c, center_id(src, 0, 0), 0, m});
          cur[si].push_back(0);
          continue;
        }
        // Root joint on the first free leaf of the spine one level up.
        auto it = std::find_if(prev[0].begin(), prev[0].end(),
                               [&](std::uint32_t c) {
                                 return centers[c].used < centers[c].capacity;
                               });
        if (it == prev[0].end())
          throw precondition_error("NoFreeSite",
                                   "no free site at level " +
                                       std::to_string(level));
        auto c = add_child(*it, center_id(src, level, 0), level);
        if (c != kNone)
          cur[si].push_back(c);
        continue;
      }
      std::size_t t_index = 0;
      for (std::uint32_t parent : prev[si]) {
        while (remaining > 0 && centers[parent].used < centers[parent].capacity) {
          auto c = add_child(parent, center_id(src, level, t_index++), level);
          if (c != kNone)
            cur[si].push_back(c);
          --remaining;
        }
        if (remaining == 0)
          break;
      }
      if (remaining > 0)
        throw invariant_error("BranchingTooLarge",
                              "level " + std::to_string(level) +
                                  " of a block does not fit its parents");
    }
    prev = std::move(cur);
  }
  // Remaining slots become degree-one leaves.
  for (auto &c : centers) {
    const std::size_t level = t.level[c.vertex];
    for (std::uint64_t k = 0; c.used < c.capacity; ++k, ++c.used) {
      VertexId leaf =
          gb.add_vertex(c.id + "_l" + std::to_string(k), Part::v1);
      t.level.push_back(level);
      gb.add_edge_pair(c.vertex, leaf, n, 1);
    }
    guard();
  }
  t.graph = std::move(gb).build();
  return t;
}

Truncation canonical_indexing(const StarTreeSpec &spec, std::uint64_t n,
                              std::size_t depth) {
  if (n < 3)
    throw precondition_error("InvalidDegree", "n must be at least 3");
  return truncate(spec, AdmissibleSequence::canonical(n), depth);
}

Truncation admissible_indexing(const StarTreeSpec &spec,
                               const AdmissibleSequence &s,
                               std::size_t depth) {
  if (auto v = s.violations(); !v.empty())
    throw precondition_error("NotAdmissible", v.front());
  return truncate(spec, s, depth);
}

std::vector<std::size_t> path_levels(const Truncation &t) {
  const auto &g = t.graph;
  std::vector<std::size_t> count(g.vertex_count(), 0);
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<VertexId> queue{t.base};
  seen[t.base] = 1;
  count[t.base] = g.vertex(t.base).part == Part::v1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.outgoing(v)) {
      VertexId u = g.edge(e).terminus;
      if (seen[u])
        continue;
      seen[u] = 1;
      count[u] = count[v] + (g.vertex(u).part == Part::v1);
      queue.push_back(u);
    }
  }
  // A leaf carries the level of its center.
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.vertex(v).part == Part::v1 && !g.vertex(v).frontier &&
        g.outgoing(v).size() == 1 && count[v] > 0)
      --count[v];
  return count;
}

namespace {

bool same_sequence(const AdmissibleSequence &a, const AdmissibleSequence &b) {
  if (a.n() != b.n())
    return false;
  std::size_t span = std::max(a.prefix().size(), b.prefix().size()) +
                     std::lcm(a.period().size(), b.period().size());
  for (std::size_t k = 1; k <= span; ++k)
    if (a.at(k) != b.at(k))
      return false;
  return true;
}

void check_rule(const StarTreeSpec &spec, const AdmissibleSequence &s) {
  if (spec.rule && !same_sequence(spec.rule->weights->sequence(), s))
    throw precondition_error(
        "RuleWeightsMismatch",
        "the digit rule's blocks use a different sequence than the indexing");
}

enum class Cls { v0, v1, all };

Cls selector_class(const Selector &sel) {
  switch (sel.kind) {
  case Selector::Kind::v0:
    return Cls::v0;
  case Selector::Kind::v1:
    return Cls::v1;
  case Selector::Kind::all:
    return Cls::all;
  case Selector::Kind::explicit_set:
    break;
  }
  throw precondition_error("InvalidSelector",
                           "star-tree covolume takes v0, v1 or all");
}

// Leaves of the centers at `level`.
Integer leaves_at(const std::vector<Integer> &L, std::uint64_t m,
                  std::size_t level) {
  Integer next = level + 1 < L.size() ? L[level + 1] : Integer(0);
  return L[level] * (m - 1) - next + (level == 0 ? 1 : 0);
}

// Finite part of a block's V0 sum at absolute levels >= from.
Rational finite_block_sum(const BlockShape &b, std::size_t root,
                          std::size_t from, const Weights &h) {
  Rational sum = 0;
  const std::size_t levels = *b.levels();
  for (std::size_t i = 0; i < levels; ++i)
    if (root + i >= from)
      sum += Rational(b.count(i)) / Rational(h.h(root + i));
  sum.canonicalize();
  return sum;
}

std::optional<Rational> block_exact(const BlockShape &b, std::size_t root,
                                    const Weights &h) {
  switch (b.kind) {
  case BlockShape::Kind::ray:
    return h.inverse_tail(root);
  case BlockShape::Kind::Tf:
    return b.f->series_exact(h, root, 0);
  default:
    return finite_block_sum(b, root, 0, h);
  }
}

// Upper bound for the block's V0 sum at levels > depth.
Rational block_tail(const BlockShape &b, std::size_t root, std::size_t depth,
                    const Weights &h, std::string &how) {
  const std::size_t from = std::max(root, depth + 1);
  switch (b.kind) {
  case BlockShape::Kind::ray:
    // h(j) >= 2^(j - from) h(from) for j >= from.
    how = "ray: 2/h(d+1)";
    return Rational(2) / Rational(h.h(from));
  case BlockShape::Kind::Tf:
    return b.f->series_upper(h, root, from - root);
  default:
    return finite_block_sum(b, root, from, h);
  }
}

Rational scale_for(Cls cls, std::uint64_t m, std::uint64_t n) {
  switch (cls) {
  case Cls::v0:
    return 1;
  case Cls::v1:
    return make_rational(m, n);
  case Cls::all:
    return make_rational(m + n, n);
  }
  return 1;
}

} // namespace

Rational partial_covolume(const StarTreeSpec &spec, const AdmissibleSequence &s,
                          const Selector &selector, std::size_t depth) {
  const Cls cls = selector_class(selector);
  const Weights h(s);
  const std::uint64_t n = s.n();
  auto L = level_counts(spec, depth + 1);
  Rational sum = 0;
  Integer hl = 1;
  bool any = false;
  for (std::size_t l = 0; l <= depth; ++l) {
    if (l > 0)
      hl *= h.ratio(l - 1);
    if (cls != Cls::v1) {
      sum += Rational(L[l]) / Rational(hl);
      any = any || L[l] > 0;
    }
    if (cls != Cls::v0) {
      Integer leaves = leaves_at(L, spec.m, l);
      // Leaves carry N = n h(l), joints N = r_l h(l) = n h(l) / s_l.
      Integer joints_weighted = l >= 1 ? L[l] * s.at(l) : Integer(0);
      sum += Rational(leaves + joints_weighted) / Rational(hl * n);
      any = any || leaves > 0 || (l >= 1 && L[l] > 0);
    }
  }
  if (!any)
    throw precondition_error("EmptySelector", "selector '" + selector.name() +
                                                  "' selects no vertices");
  sum.canonicalize();
  return sum;
}

std::optional<Rational> covolume_exact(const StarTreeSpec &spec,
                                       const AdmissibleSequence &s,
                                       const Selector &selector) {
  const Cls cls = selector_class(selector);
  check_rule(spec, s);
  const Weights h(s);
  Rational v0 = 0;
  auto add = [&](std::optional<Rational> x) {
    if (!x)
      return false;
    v0 += *x;
    return true;
  };
  if (!add(block_exact(spec.spine, 0, h)))
    return std::nullopt;
  for (const auto &g : spec.gluings)
    if (!add(block_exact(g.block, g.level, h)))
      return std::nullopt;
  if (spec.rule) {
    const auto &r = *spec.rule;
    if (r.kind == DigitRule::Kind::compensating)
      return std::nullopt;
    // Block B_{e_j, j} contributes e_j / h(j) under matching weights.
    auto c = [&](std::size_t j) {
      return j == 0 ? Rational(0) : Rational(r.digits.at(j - 1));
    };
    v0 += h.periodic_series(c, 1 + r.digits.prefix.size(),
                            r.digits.period.size(), 1);
  }
  // With every center of degree m the V1 sum is (m/n) times the V0 sum.
  Rational out = v0 * scale_for(cls, spec.m, s.n());
  out.canonicalize();
  return out;
}

CovolumeReport covolume(const StarTreeSpec &spec, const AdmissibleSequence &s,
                        const Selector &selector, std::size_t depth) {
  const Cls cls = selector_class(selector);
  check_rule(spec, s);
  const Weights h(s);
  CovolumeReport rep;
  rep.depth = depth;
  rep.exact = covolume_exact(spec, s, selector);
  const Rational lo = partial_covolume(spec, s, selector, depth);
  std::string how = "exact remainder of finite blocks";
  Rational tail = block_tail(spec.spine, 0, depth, h, how);
  for (const auto &g : spec.gluings)
    tail += block_tail(g.block, g.level, depth, h, how);
  if (spec.rule) {
    const auto &r = *spec.rule;
    auto e = r.digits_upto(depth);
    for (std::size_t j = 1; j <= depth; ++j)
      if (e[j - 1] > 0)
        tail += finite_block_sum(BlockShape::Bpq(e[j - 1], j, *r.weights), j,
                                 depth + 1, h);
    // Blocks rooted past the depth: e_j / h(j) <= E / h(j).
    tail += Rational(2 * r.max_digit()) / Rational(h.h(depth + 1));
  }
  // Per level the V1 sum is at most (m - 1 + n)/n times the V0 sum.
  Rational factor = 1;
  if (cls == Cls::v1)
    factor = make_rational(spec.m - 1 + s.n(), s.n());
  else if (cls == Cls::all)
    factor = make_rational(spec.m - 1 + 2 * s.n(), s.n());
  rep.interval = {lo, lo + tail * factor};
  rep.interval.hi.canonicalize();
  rep.tail_bound = "partial sum over levels <= " + std::to_string(depth) +
                   " plus level-tail bound (h(j) >= 2^j, exact remainders of "
                   "finite blocks, closed-form envelopes of T_f)";
  return rep;
}

std::vector<Integer> ball_growth_levels(const StarTreeSpec &spec,
                                        std::size_t k_max) {
  auto L = level_counts(spec, k_max + 1);
  std::vector<Integer> out;
  Integer total = 0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    total += L[k];            // centers at level k
    if (k >= 1) {
      total += L[k];          // their parent joints
      total += leaves_at(L, spec.m, k - 1);
    }
    out.push_back(total);
  }
  return out;
}

std::vector<Integer> stabilizer_growth_levels(const StarTreeSpec &spec,
                                              const AdmissibleSequence &s,
                                              std::size_t k_max,
                                              bool v0_only) {
  const Weights h(s);
  auto L = level_counts(spec, k_max + 1);
  std::vector<Integer> out;
  Integer best = 0, hk = 1;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) {
      if (!v0_only && leaves_at(L, spec.m, k - 1) > 0)
        best = std::max(best, Integer(hk * s.n()));
      hk *= h.ratio(k - 1);
    }
    if (L[k] > 0) {
      best = std::max(best, hk);
      if (!v0_only && k >= 1)
        best = std::max(best, Integer(hk * s.r(k)));
    }
    out.push_back(best);
  }
  return out;
}

} // namespace treelat

namespace treelat {

Json sequence_to_json(const AdmissibleSequence &s) {
  return {{"n", s.n()}, {"s_prefix", s.prefix()}, {"s_period", s.period()}};
}

AdmissibleSequence sequence_from_json(const Json &doc) {
  try {
    AdmissibleSequence s(doc.at("n").get<std::uint64_t>(),
                         doc.value("s_prefix", std::vector<std::uint64_t>{}),
                         doc.value("s_period", std::vector<std::uint64_t>{}));
    return s;
  } catch (const nlohmann::json::exception &e) {
    throw parse_error(std::string("sequence: ") + e.what());
  }
}

Json block_to_json(const BlockShape &b) {
  switch (b.kind) {
  case BlockShape::Kind::ray:
    return {{"kind", "ray"}};
  case BlockShape::Kind::counts: {
    Json c = Json::array();
    for (const auto &x : b.level_counts)
      c.push_back(x.get_str());
    return {{"kind", "counts"}, {"counts", std::move(c)}};
  }
  case BlockShape::Kind::Bp:
    return {{"kind", "Bp"}, {"p", b.p}, {"b", b.branching}};
  case BlockShape::Kind::Bpq:
    return {{"kind", "Bpq"},
            {"p", b.p},
            {"q", b.q},
            {"sequence", sequence_to_json(b.weights->sequence())}};
  case BlockShape::Kind::Tf:
    return {{"kind", "Tf"}, {"f", growth_to_json(*b.f)}};
  }
  return {};
}

BlockShape block_from_json(const Json &doc, std::uint64_t m) {
  if (doc.is_string()) {
    auto name = doc.get<std::string>();
    if (name == "ray")
      return BlockShape::ray();
    if (name == "star")
      return BlockShape::star();
    throw parse_error("unknown block '" + name + "'");
  }
  if (!doc.is_object() || !doc.contains("kind"))
    throw parse_error("block needs a 'kind'");
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "ray")
      return BlockShape::ray();
    if (kind == "star")
      return BlockShape::star();
    if (kind == "counts") {
      std::vector<Integer> c;
      for (const auto &x : doc.at("counts"))
        c.emplace_back(x.is_string() ? x.get<std::string>() : x.dump());
      return BlockShape::explicit_counts(std::move(c));
    }
    if (kind == "Bp")
      return build_Bp(doc.at("p").get<std::uint64_t>(), m,
                      doc.at("b").get<std::uint64_t>());
    if (kind == "Bpq")
      return build_Bpq(doc.at("p").get<std::uint64_t>(),
                       doc.at("q").get<std::size_t>(),
                       Weights(sequence_from_json(doc.at("sequence"))), m);
    if (kind == "Tf")
      return BlockShape::Tf(growth_from_json(doc.at("f")));
    throw parse_error("unknown block kind '" + kind + "'");
  } catch (const nlohmann::json::exception &e) {
    throw parse_error(std::string("block: ") + e.what());
  }
}

namespace {

Json rule_to_json(const DigitRule &r) {
  Json j;
  if (r.kind == DigitRule::Kind::periodic) {
    j["kind"] = "periodic";
    j["digits"] = {{"prefix", r.digits.prefix}, {"period", r.digits.period}};
  } else {
    j["kind"] = "compensating";
    j["target"] = to_string(r.target);
    j["f"] = growth_to_json(*r.f);
    j["bound"] = r.bound;
  }
  j["sequence"] = sequence_to_json(r.weights->sequence());
  if (r.skip)
    j["skip"] = *r.skip;
  return j;
}

DigitRule rule_from_json(const Json &doc) {
  DigitRule r;
  try {
    const auto kind = doc.at("kind").get<std::string>();
    r.weights = std::make_shared<const Weights>(
        sequence_from_json(doc.at("sequence")));
    if (doc.contains("skip"))
      r.skip = doc["skip"].get<std::size_t>();
    if (kind == "periodic") {
      const auto &d = doc.at("digits");
      r.digits.prefix = d.value("prefix", std::vector<std::int64_t>{});
      r.digits.period = d.value("period", std::vector<std::int64_t>{});
      for (auto v : r.digits.prefix)
        if (v < 0)
          throw parse_error("digits must be >= 0");
      for (auto v : r.digits.period)
        if (v < 0)
          throw parse_error("digits must be >= 0");
    } else if (kind == "compensating") {
      r.kind = DigitRule::Kind::compensating;
      r.target = rational_from_json(doc.at("target"));
      r.f = std::make_shared<const GrowthFunction>(growth_from_json(doc.at("f")));
      r.bound = doc.at("bound").get<std::uint64_t>();
    } else {
      throw parse_error("unknown rule kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception &e) {
    throw parse_error(std::string("generator_rule: ") + e.what());
  }
  return r;
}

} // namespace

Json spec_to_json(const StarTreeSpec &spec) {
  Json j;
  j["m"] = spec.m;
  if (spec.spine.kind == BlockShape::Kind::ray)
    j["spine"] = "ray";
  else if (spec.spine.kind == BlockShape::Kind::counts &&
           spec.spine.level_counts.size() == 1)
    j["spine"] = "star";
  else
    j["spine"] = block_to_json(spec.spine);
  Json g = Json::array();
  for (const auto &gl : spec.gluings)
    g.push_back({{"block", block_to_json(gl.block)}, {"level", gl.level}});
  j["gluings"] = std::move(g);
  if (spec.rule)
    j["generator_rule"] = rule_to_json(*spec.rule);
  return j;
}

StarTreeSpec spec_from_json(const Json &doc) {
  if (!doc.is_object())
    throw parse_error("star tree spec must be an object");
  StarTreeSpec spec;
  try {
    spec.m = doc.at("m").get<std::uint64_t>();
    if (spec.m < 3)
      throw precondition_error("InvalidDegree", "star trees need m >= 3");
    spec.spine = block_from_json(doc.value("spine", Json("ray")), spec.m);
    if (doc.contains("gluings"))
      for (const auto &g : doc["gluings"])
        spec.gluings.push_back(
            {block_from_json(g.at("block"), spec.m), g.at("level").get<std::size_t>()});
    if (doc.contains("generator_rule"))
      spec.rule = rule_from_json(doc["generator_rule"]);
  } catch (const nlohmann::json::exception &e) {
    throw parse_error(std::string("star tree spec: ") + e.what());
  }
  if (auto v = spec_violations(spec); !v.empty())
    throw invariant_error("InvalidSpec", v.front());
  return spec;
}

} // namespace treelat
