//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_KERNELS_HPP
#define TREELAT_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference with the
// same signature; the parallel versions produce identical output and are
// tested against the references.

#include <cstdint>
#include <span>
#include <vector>

#include "treelat/group_algebra.hpp"
#include "treelat/indexed_graph.hpp"

namespace treelat::kernels {

/// Level-synchronous expansion of the universal covering tree.
CoverBall cover_ball_serial(const EdgeIndexedGraph &graph, VertexId base,
                            std::uint32_t radius);
CoverBall cover_ball_parallel(const EdgeIndexedGraph &graph, VertexId base,
                              std::uint32_t radius);

/// cumulative[r] = #{v : dist[v] <= r * step} for r = 0..max_radius.
std::vector<std::uint64_t>
ball_counts_serial(std::span<const std::uint32_t> dist,
                   std::uint32_t max_radius, std::uint32_t step);
std::vector<std::uint64_t>
ball_counts_parallel(std::span<const std::uint32_t> dist,
                     std::uint32_t max_radius, std::uint32_t step);

/// running[r] = max{value[v] : dist[v] <= r * step, include[v]} (0 if none).
std::vector<Integer> ball_max_serial(std::span<const std::uint32_t> dist,
                                     std::span<const Integer> value,
                                     std::span<const char> include,
                                     std::uint32_t max_radius,
                                     std::uint32_t step);
std::vector<Integer> ball_max_parallel(std::span<const std::uint32_t> dist,
                                       std::span<const Integer> value,
                                       std::span<const char> include,
                                       std::uint32_t max_radius,
                                       std::uint32_t step);

/// Failure counts of the exhaustive tower checks on levels 0..max_level.
struct TowerCheckCounts {
  std::uint64_t iota_collisions = 0;    // iota_j not injective
  std::uint64_t action_not_bijective = 0;
  std::uint64_t action_not_additive = 0;
  std::uint64_t action_not_homomorphic = 0; // phi(uv) != phi(u) phi(v)
  std::uint64_t equivariance_failures = 0;
  std::uint64_t unfaithful_units = 0;   // nontrivial units fixing G_k
  std::uint64_t pairs_checked = 0;
  bool operator==(const TowerCheckCounts &) const = default;
  bool ok() const {
    return iota_collisions == 0 && action_not_bijective == 0 &&
           action_not_additive == 0 && action_not_homomorphic == 0 &&
           equivariance_failures == 0 && unfaithful_units == 0;
  }
};

TowerCheckCounts tower_check_serial(const SemidirectTower &tower,
                                    std::size_t max_level);
TowerCheckCounts tower_check_parallel(const SemidirectTower &tower,
                                      std::size_t max_level);

} // namespace treelat::kernels

#endif
