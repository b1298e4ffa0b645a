//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/kernels.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace treelat::kernels {

namespace {

using Node = CoverBall::Node;

CoverBall make_root(const EdgeIndexedGraph &graph, VertexId base,
                    std::uint32_t radius) {
  CoverBall ball;
  ball.radius = radius;
  Node root;
  root.projection = base;
  root.truncated = graph.vertex(base).frontier;
  ball.nodes.push_back(root);
  return ball;
}

std::uint32_t child_count(const EdgeIndexedGraph &graph, const Node &x,
                          std::uint32_t radius, bool is_root) {
  if (x.truncated || x.depth >= radius)
    return 0;
  auto total = static_cast<std::uint32_t>(graph.lifted_degree(x.projection));
  return is_root ? total : total - 1;
}

template <typename Out>
void emit_children(const EdgeIndexedGraph &graph, const Node &x,
                   std::uint32_t self, bool is_root, Out out) {
  const EdgeId back = is_root ? kNone : graph.edge(x.edge).reverse;
  for (EdgeId e : graph.incoming(x.projection)) {
    const Edge &edge = graph.edge(e);
    const auto copies = static_cast<std::uint32_t>(edge.index);
    for (std::uint32_t c = (e == back ? 1u : 0u); c < copies; ++c) {
      Node child;
      child.projection = edge.origin;
      child.parent = self;
      child.edge = e;
      child.copy = c;
      child.depth = x.depth + 1;
      child.truncated = graph.vertex(edge.origin).frontier;
      out(child);
    }
  }
}

} // namespace

CoverBall cover_ball_serial(const EdgeIndexedGraph &graph, VertexId base,
                            std::uint32_t radius) {
  CoverBall ball = make_root(graph, base, radius);
  for (std::uint32_t i = 0; i < ball.nodes.size(); ++i) {
    const Node x = ball.nodes[i];
    if (child_count(graph, x, radius, i == 0) == 0)
      continue;
    emit_children(graph, x, i, i == 0,
                  [&](const Node &child) { ball.nodes.push_back(child); });
  }
  return ball;
}

CoverBall cover_ball_parallel(const EdgeIndexedGraph &graph, VertexId base,
                              std::uint32_t radius) {
  CoverBall ball = make_root(graph, base, radius);
  std::size_t begin = 0, end = 1;
  std::vector<std::uint64_t> offsets;
  while (begin < end) {
    const std::size_t width = end - begin;
    offsets.assign(width + 1, 0);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < width; ++i)
      offsets[i + 1] = child_count(graph, ball.nodes[begin + i], radius,
                                   begin + i == 0);
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    const std::size_t next_end = end + offsets.back();
    ball.nodes.resize(next_end);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < width; ++i) {
      const std::size_t self = begin + i;
      if (offsets[i + 1] == offsets[i])
        continue;
      std::size_t slot = end + offsets[i];
      emit_children(graph, ball.nodes[self], static_cast<std::uint32_t>(self),
                    self == 0,
                    [&](const Node &child) { ball.nodes[slot++] = child; });
    }
    begin = end;
    end = next_end;
  }
  return ball;
}

namespace {

inline std::uint32_t bucket(std::uint32_t d, std::uint32_t step) {
  return (d + step - 1) / step;
}

} // namespace

std::vector<std::uint64_t>
ball_counts_serial(std::span<const std::uint32_t> dist,
                   std::uint32_t max_radius, std::uint32_t step) {
  std::vector<std::uint64_t> out(max_radius + 1, 0);
  for (auto d : dist) {
    if (d == kNone)
      continue;
    auto b = bucket(d, step);
    if (b <= max_radius)
      ++out[b];
  }
  std::partial_sum(out.begin(), out.end(), out.begin());
  return out;
}

std::vector<std::uint64_t>
ball_counts_parallel(std::span<const std::uint32_t> dist,
                     std::uint32_t max_radius, std::uint32_t step) {
  std::vector<std::uint64_t> out(max_radius + 1, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(max_radius + 1, 0);
#pragma omp for schedule(static) nowait
    for (std::size_t i = 0; i < dist.size(); ++i) {
      auto d = dist[i];
      if (d == kNone)
        continue;
      auto b = bucket(d, step);
      if (b <= max_radius)
        ++local[b];
    }
#pragma omp critical
    for (std::size_t r = 0; r <= max_radius; ++r)
      out[r] += local[r];
  }
  std::partial_sum(out.begin(), out.end(), out.begin());
  return out;
}

std::vector<Integer> ball_max_serial(std::span<const std::uint32_t> dist,
                                     std::span<const Integer> value,
                                     std::span<const char> include,
                                     std::uint32_t max_radius,
                                     std::uint32_t step) {
  std::vector<Integer> out(max_radius + 1, 0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == kNone || !include[i])
      continue;
    auto b = bucket(dist[i], step);
    if (b <= max_radius && value[i] > out[b])
      out[b] = value[i];
  }
  for (std::size_t r = 1; r < out.size(); ++r)
    if (out[r - 1] > out[r])
      out[r] = out[r - 1];
  return out;
}

std::vector<Integer> ball_max_parallel(std::span<const std::uint32_t> dist,
                                       std::span<const Integer> value,
                                       std::span<const char> include,
                                       std::uint32_t max_radius,
                                       std::uint32_t step) {
  std::vector<Integer> out(max_radius + 1, 0);
#pragma omp parallel
  {
    std::vector<Integer> local(max_radius + 1, 0);
#pragma omp for schedule(static) nowait
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] == kNone || !include[i])
        continue;
      auto b = bucket(dist[i], step);
      if (b <= max_radius && value[i] > local[b])
        local[b] = value[i];
    }
#pragma omp critical
    for (std::size_t r = 0; r <= max_radius; ++r)
      if (local[r] > out[r])
        out[r] = local[r];
  }
  for (std::size_t r = 1; r < out.size(); ++r)
    if (out[r - 1] > out[r])
      out[r] = out[r - 1];
  return out;
}

namespace {

using TE = SemidirectTower::Element;

// Checks owned by one unit u at level j.
void check_unit_level(const SemidirectTower &t, std::size_t ui, std::size_t j,
                      std::size_t max_level, std::vector<char> &seen,
                      TowerCheckCounts &c) {
  const auto &units = t.units();
  const std::uint64_t u = units[ui];
  const std::uint64_t size = t.small_order(j);
  auto [p, q] = t.factor_moduli(j);
  seen.assign(size, 0);
  bool moved = false;
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    TE g = t.element(j, idx);
    TE img = t.act(j, u, g);
    auto at = t.index_of(j, img);
    if (seen[at])
      ++c.action_not_bijective;
    seen[at] = 1;
    if (!(img == g))
      moved = true;
    for (TE gen : {TE{1 % p, 0}, TE{0, 1 % q}}) {
      auto lhs = t.act(j, u, t.add(j, gen, g));
      auto rhs = t.add(j, t.act(j, u, gen), img);
      if (!(lhs == rhs))
        ++c.action_not_additive;
    }
    for (auto v : units) {
      auto lhs = t.act(j, t.unit_multiply(u, v), g);
      auto rhs = t.act(j, u, t.act(j, v, g));
      if (!(lhs == rhs))
        ++c.action_not_homomorphic;
      ++c.pairs_checked;
    }
    if (j < max_level) {
      auto lhs = t.include(j, img);
      auto rhs = t.act(j + 1, u, t.include(j, g));
      if (!(lhs == rhs))
        ++c.equivariance_failures;
    }
  }
  if (j == t.k() && ui != 0 && !moved)
    ++c.unfaithful_units;
}

void check_iota(const SemidirectTower &t, std::size_t j,
                TowerCheckCounts &c) {
  std::vector<char> seen(t.small_order(j + 1), 0);
  for (std::uint64_t idx = 0; idx < t.small_order(j); ++idx) {
    auto at = t.index_of(j + 1, t.include(j, t.element(j, idx)));
    if (seen[at])
      ++c.iota_collisions;
    seen[at] = 1;
  }
}

void merge(TowerCheckCounts &into, const TowerCheckCounts &from) {
  into.iota_collisions += from.iota_collisions;
  into.action_not_bijective += from.action_not_bijective;
  into.action_not_additive += from.action_not_additive;
  into.action_not_homomorphic += from.action_not_homomorphic;
  into.equivariance_failures += from.equivariance_failures;
  into.unfaithful_units += from.unfaithful_units;
  into.pairs_checked += from.pairs_checked;
}

} // namespace

TowerCheckCounts tower_check_serial(const SemidirectTower &tower,
                                    std::size_t max_level) {
  TowerCheckCounts counts;
  std::vector<char> seen;
  for (std::size_t j = 0; j <= max_level; ++j) {
    if (j < max_level)
      check_iota(tower, j, counts);
    for (std::size_t ui = 0; ui < tower.units().size(); ++ui)
      check_unit_level(tower, ui, j, max_level, seen, counts);
  }
  return counts;
}

TowerCheckCounts tower_check_parallel(const SemidirectTower &tower,
                                      std::size_t max_level) {
  TowerCheckCounts counts;
  for (std::size_t j = 0; j < max_level; ++j)
    check_iota(tower, j, counts);
  const std::size_t nu = tower.units().size();
  const std::size_t work = nu * (max_level + 1);
#pragma omp parallel
  {
    TowerCheckCounts local;
    std::vector<char> seen;
#pragma omp for schedule(dynamic, 1) nowait
    for (std::size_t w = 0; w < work; ++w)
      check_unit_level(tower, w % nu, w / nu, max_level, seen, local);
#pragma omp critical
    merge(counts, local);
  }
  return counts;
}

} // namespace treelat::kernels
