//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_REALIZE_HPP
#define TREELAT_REALIZE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treelat/group_algebra.hpp"
#include "treelat/grouping.hpp"
#include "treelat/growth.hpp"
#include "treelat/kernels.hpp"
#include "treelat/star_tree.hpp"

namespace treelat {

/// Bounded digits e_1, e_2, ... with sum_j e_j / h(j) = target exactly.
struct DigitSequence {
  PeriodicSequence digits; // entry i is e_{i+1}
  std::shared_ptr<const Weights> weights;
  std::optional<std::size_t> skip;
  Rational target;
  std::uint64_t bound = 0;

  /// Closed-form sum over the eventually periodic digits.
  Rational sum() const;
  /// sum_{j <= d} e_j / h(j).
  Rational partial_sum(std::size_t d) const;
};

inline constexpr std::size_t kDefaultDigitHorizon = 1'000'000;

/// max(2(n-1), (n-1)^2 + n, ceil(rho h(j)) + 1) where j is the first
/// level not reserved by `skip`.
std::uint64_t default_digit_bound(const Weights &h, const Rational &rho,
                                  std::optional<std::size_t> skip = {});

/// Minimal (prefix, period) form; an all-zero period becomes empty.
PeriodicSequence normalize(PeriodicSequence seq);

/// Greedy expansion e_j = min(bound, floor(x_{j-1} (s_j - 1))) with
/// e_skip = 0, stopped when the state (remainder, phase) repeats. Throws
/// DigitHorizonExceeded when no repetition occurs within `horizon` steps.
DigitSequence digit_sequence(const Rational &rho, const Weights &h,
                             std::uint64_t bound,
                             std::optional<std::size_t> skip = {},
                             std::size_t horizon = kDefaultDigitHorizon);

/// sum_j 1/h(j).
Rational kappa0(const Weights &h);

struct Realization {
  StarTreeSpec spec;
  AdmissibleSequence sequence = AdmissibleSequence::canonical(3);
  Rational kappa;          // requested covolume
  Rational kappa0;         // sum 1/h(j)
  Rational spec_covolume;  // V0-covolume of the spec = kappa * |H|
  std::optional<DigitSequence> digits; // periodic digits, when exact
  std::optional<std::size_t> tf_level; // level k carrying T_f
  std::optional<GrowthFunction> f;
  std::optional<Rational> nu_exact;    // V0-covolume of T_f at level k
  Rational nu_upper;                   // the bound used to choose k
  std::uint64_t digit_bound = 0;
  std::optional<std::size_t> tower_k;  // shrinking step, if kappa <= kappa0
  Integer units = 1;                   // |H|
};

/// kappa > kappa0: the star ray with B_{e_j} glued at level j. Throws
/// BelowKappa0 otherwise.
Realization realize_covolume(const Rational &kappa, std::uint64_t m,
                             std::uint64_t n);
/// Adds T_f at the smallest level k whose covolume bound fits. Smaller
/// kappa are handled by the tower shrinking step.
Realization realize_covolume_growth(const Rational &kappa,
                                    const GrowthFunction &f, std::uint64_t m,
                                    std::uint64_t n);
/// Weights h(j) from an admissible sequence; needs n > 4 composite.
Realization realize_full(const Rational &kappa, const GrowthFunction &f,
                         const AdmissibleSequence &s, std::uint64_t m);

/// The tower for h(j) = (n-1)^j.
SemidirectTower build_semidirect_tower(std::uint64_t n, std::size_t k);

struct TowerReport {
  kernels::TowerCheckCounts counts;
  std::uint64_t units = 0;
  // (u, phi_k(u)(1)) for every nontrivial unit u; faithful when each
  // image differs from 1.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> faithfulness;
  bool faithful = false;
};

TowerReport verify_tower(const SemidirectTower &tower, std::size_t max_level);

struct ShrinkResult {
  std::shared_ptr<const SemidirectTower> tower;
  Truncation truncation;
  FiniteGrouping grouping;
  std::optional<Rational> covolume; // exact V0-covolume / |H|
  RationalInterval interval;
  Integer units;
};

/// Groupings G_l x| H on the truncation to `depth`. Throws NotFaithful when
/// the spec has no vertex at level k and TruncationTooShallow if depth < k.
ShrinkResult shrink_covolume(const StarTreeSpec &spec,
                             const AdmissibleSequence &s, std::size_t k,
                             std::size_t depth);

/// Seeded sampler: `count` pairwise distinct bounded digit sequences with
/// the same exact sum rho. The first `random_levels` digits are drawn
/// below the greedy digit; the rest is greedy.
std::vector<DigitSequence>
sample_digit_sequences(const Rational &rho, const Weights &h,
                       std::uint64_t bound, std::size_t count,
                       std::uint64_t seed, std::size_t random_levels = 12);

Json digit_sequence_to_json(const DigitSequence &d);
Json tower_report_to_json(const TowerReport &r);
/// Inputs, k, digits, exact covolume, growth witnesses on 0..radius and
/// the faithfulness certificate when shrinking was used.
Json realization_report(const Realization &r, std::size_t radius = 20);

} // namespace treelat

#endif
