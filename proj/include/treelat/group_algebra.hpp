//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_GROUP_ALGEBRA_HPP
#define TREELAT_GROUP_ALGEBRA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "treelat/rational.hpp"
#include "treelat/weights.hpp"

namespace treelat {

inline constexpr std::uint64_t kDefaultEnumerationBound = 1'000'000;

/// The tower G_0 -> G_1 -> ... with |G_j| = h(j), together with the unit
/// group H of Z/h(k) acting on it:
///   G_j = Z/h(j)                    for j <= k
///   G_j = Z/h(k) x Z/(h(j)/h(k))    for j > k
/// iota_j multiplies by s_{j+1} - 1 (on the second factor once j >= k) and
/// a unit u acts by multiplication on the first factor.
class SemidirectTower {
public:
  /// Element of G_j; `b` is zero for j <= k.
  struct Element {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    bool operator==(const Element &) const = default;
  };

  SemidirectTower(Weights weights, std::size_t k);

  const Weights &weights() const { return weights_; }
  std::size_t k() const { return k_; }
  std::uint64_t modulus() const { return modulus_; }
  const std::vector<std::uint64_t> &units() const { return units_; }
  std::uint64_t unit_count() const { return units_.size(); }

  Integer order(std::size_t j) const { return weights_.h(j); }
  /// Moduli of the two factors of G_j (second is 1 for j <= k).
  std::pair<std::uint64_t, std::uint64_t> factor_moduli(std::size_t j) const;

  Element include(std::size_t j, Element g) const;
  Element act(std::size_t j, std::uint64_t unit, Element g) const;
  Element add(std::size_t j, Element x, Element y) const;
  std::uint64_t unit_multiply(std::uint64_t u, std::uint64_t v) const {
    return (u * v) % modulus_;
  }

  /// Element with mixed-radix index `idx` in G_j.
  Element element(std::size_t j, std::uint64_t idx) const;
  std::uint64_t index_of(std::size_t j, Element g) const;
  /// |G_j| as a machine integer (throws when it does not fit).
  std::uint64_t small_order(std::size_t j) const;

private:
  Weights weights_;
  std::size_t k_;
  std::uint64_t modulus_;
  std::vector<std::uint64_t> units_;
  std::vector<std::uint64_t> h_small_; // h(0..k) plus cached levels
};

/// Structured description of a finite group used as a vertex or edge group.
struct GroupDesc {
  enum class Kind { cyclic, product, semidirect };
  Kind kind = Kind::cyclic;
  std::vector<Integer> orders;                    // cyclic: {N}; product: {a, b}
  std::shared_ptr<const SemidirectTower> tower;   // semidirect only
  std::size_t level = 0;                          // G_level x| H
  std::uint64_t extra = 1;                        // extra direct factor Z/extra

  static GroupDesc cyclic(Integer order);
  static GroupDesc product(Integer a, Integer b);
  static GroupDesc semidirect(std::shared_ptr<const SemidirectTower> tower,
                              std::size_t level, std::uint64_t extra = 1);

  Integer order() const;
  std::string describe() const;
};

/// Group element in a uniform encoding: cyclic {x}; product {x, y};
/// semidirect {a, b, unit, c}.
using GroupElement = std::vector<std::uint64_t>;

/// Enumerates all elements; the group order must be below `bound`.
std::vector<GroupElement> enumerate_elements(const GroupDesc &g,
                                             std::uint64_t bound);
GroupElement multiply(const GroupDesc &g, const GroupElement &x,
                      const GroupElement &y);
std::vector<GroupElement> generators(const GroupDesc &g);

/// Edge monomorphism alpha_e : A_e -> A_{terminus e}.
struct Injection {
  enum class Kind {
    cyclic_multiply, // [1] -> [factor]
    identity,
    tower_step,   // (g, u, c) -> (iota(g), u, 0)
    first_factor  // (g, u, c) -> (g, u, 0) into a group with larger extra
  };
  Kind kind = Kind::identity;
  std::uint64_t factor = 1;

  std::string describe() const;
};

GroupElement apply(const Injection &inj, const GroupDesc &from,
                   const GroupDesc &to, const GroupElement &x);

/// Exhaustive homomorphism + injectivity check below the bound; above the
/// bound only the order identity |to| = index * |from| is checked by the
/// caller. Returns a list of failures.
std::vector<std::string> check_injection(const Injection &inj,
                                         const GroupDesc &from,
                                         const GroupDesc &to,
                                         std::uint64_t bound);

} // namespace treelat

#endif
