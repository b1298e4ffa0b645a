//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_STAR_TREE_HPP
#define TREELAT_STAR_TREE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treelat/graph_io.hpp"
#include "treelat/growth.hpp"
#include "treelat/grouping.hpp"
#include "treelat/indexed_graph.hpp"
#include "treelat/weights.hpp"

namespace treelat {

// A star tree is described by how many stars (V0 centers) sit at each
// level. Blocks carry their own level counts relative to their root; a
// spec is a spine block rooted at the basepoint plus blocks glued to the
// spine. Children are handed to parents in order, each parent taking as
// many as it has free slots.

struct BlockShape {
  enum class Kind { ray, counts, Bp, Bpq, Tf };
  Kind kind = Kind::ray;
  std::uint64_t p = 0;         // Bp, Bpq: number of levels
  std::uint64_t branching = 0; // Bp
  std::size_t q = 0;           // Bpq: weight offset
  std::shared_ptr<const Weights> weights;  // Bpq
  std::shared_ptr<const GrowthFunction> f; // Tf
  std::vector<Integer> level_counts;       // counts

  static BlockShape ray();
  static BlockShape star() { return explicit_counts({1}); }
  static BlockShape explicit_counts(std::vector<Integer> counts);
  static BlockShape Bp(std::uint64_t p, std::uint64_t b);
  static BlockShape Bpq(std::uint64_t p, std::size_t q, const Weights &h);
  static BlockShape Tf(const GrowthFunction &f);

  /// Number of levels, or nullopt for an infinite block.
  std::optional<std::size_t> levels() const;
  /// Centers at relative level i (zero past the last level).
  Integer count(std::size_t i) const;
  std::string describe() const;
};

struct Gluing {
  BlockShape block;
  std::size_t level = 1; // level of the block's root center
};

/// Infinitely many B blocks, one per level j >= 1, with e_j levels and
/// branching h(j+i+1)/h(j+i). `periodic` stores e directly; `compensating`
/// derives e_j from the mass left after a glued T_f block (see realize).
struct DigitRule {
  enum class Kind { periodic, compensating };
  Kind kind = Kind::periodic;
  PeriodicSequence digits; // entry i is e_{i+1}
  std::shared_ptr<const Weights> weights;
  std::optional<std::size_t> skip; // level carrying T_f; e_skip = 0

  // compensating
  Rational target;                         // mass for digits plus T_f
  std::shared_ptr<const GrowthFunction> f; // the T_f glued at `skip`
  std::uint64_t bound = 0;

  /// e_1..e_levels.
  std::vector<std::uint64_t> digits_upto(std::size_t levels) const;
  std::uint64_t max_digit() const;
};

struct StarTreeSpec {
  std::uint64_t m = 3;
  BlockShape spine = BlockShape::ray();
  std::vector<Gluing> gluings;
  std::optional<DigitRule> rule;

  bool infinite() const;
};

StarTreeSpec build_star_ray(std::uint64_t m);
StarTreeSpec build_single_star(std::uint64_t m);
/// b^j centers at level j < p. Throws BranchingTooLarge when b > m - 1.
BlockShape build_Bp(std::uint64_t p, std::uint64_t m, std::uint64_t b);
/// h(q+j)/h(q) centers at level j < p.
BlockShape build_Bpq(std::uint64_t p, std::size_t q, const Weights &h,
                     std::uint64_t m);
/// A spec whose spine has f(j) centers at level j. Throws
/// NotAcceptable or BranchingTooLarge.
StarTreeSpec build_Tf(const GrowthFunction &f, std::uint64_t m);
/// Attaches the block's root joint to the first free leaf of the spine at
/// level - 1. Throws NoFreeSite.
StarTreeSpec glue(StarTreeSpec spec, const BlockShape &block,
                  std::size_t level);

/// Structural problems visible up to `depth`; empty means valid.
std::vector<std::string> spec_violations(const StarTreeSpec &spec,
                                         std::size_t depth = 64);

/// L(0..depth): number of centers at each level.
std::vector<Integer> level_counts(const StarTreeSpec &spec, std::size_t depth);

/// Leaf slots of the spine at `level` not used by spine children.
Integer spine_free_slots(const StarTreeSpec &spec, std::size_t level);

/// A finite prefix of the indexed star tree. Vertices past `depth` are
/// cut off; joints leading to them are frontier vertices.
struct Truncation {
  EdgeIndexedGraph graph;
  std::vector<std::size_t> level; // centers: own level; joints: far side;
                                  // leaves: their center's level
  std::size_t depth = 0;
  VertexId base = 0;
};

inline constexpr std::uint64_t kDefaultVertexLimit = 4'000'000;

/// Index rules: 1 into V0, n into leaves, n - r_k on the near side and r_k
/// on the far side of a joint between levels k-1 and k.
Truncation truncate(const StarTreeSpec &spec, const AdmissibleSequence &s,
                    std::size_t depth,
                    std::uint64_t max_vertices = kDefaultVertexLimit);
Truncation canonical_indexing(const StarTreeSpec &spec, std::uint64_t n,
                              std::size_t depth);
/// Throws NotAdmissible.
Truncation admissible_indexing(const StarTreeSpec &spec,
                               const AdmissibleSequence &s, std::size_t depth);

/// Levels recomputed by counting V1 vertices on paths from the basepoint.
std::vector<std::size_t> path_levels(const Truncation &t);

struct CovolumeReport {
  std::optional<Rational> exact;
  RationalInterval interval; // [partial sum to depth, partial + tail bound]
  std::size_t depth = 0;
  std::string tail_bound; // how the upper end was obtained
};

/// Sum of 1/N(v) over the selected class with N(v0) = 1. Throws
/// EmptySelector or InvalidSelector (explicit sets).
CovolumeReport covolume(const StarTreeSpec &spec, const AdmissibleSequence &s,
                        const Selector &selector, std::size_t depth = 30);
std::optional<Rational> covolume_exact(const StarTreeSpec &spec,
                                       const AdmissibleSequence &s,
                                       const Selector &selector);
/// Sum over levels <= depth only.
Rational partial_covolume(const StarTreeSpec &spec, const AdmissibleSequence &s,
                          const Selector &selector, std::size_t depth);

/// Half-edge ball counts from the level counts (no materialization).
std::vector<Integer> ball_growth_levels(const StarTreeSpec &spec,
                                        std::size_t k_max);
/// Largest N in the radius-k ball, from the level counts.
std::vector<Integer> stabilizer_growth_levels(const StarTreeSpec &spec,
                                              const AdmissibleSequence &s,
                                              std::size_t k_max, bool v0_only);

Json block_to_json(const BlockShape &b);
BlockShape block_from_json(const Json &doc, std::uint64_t m);
Json spec_to_json(const StarTreeSpec &spec);
StarTreeSpec spec_from_json(const Json &doc);
Json sequence_to_json(const AdmissibleSequence &s);
AdmissibleSequence sequence_from_json(const Json &doc);

} // namespace treelat

#endif
