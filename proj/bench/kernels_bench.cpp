//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "treelat/kernels.hpp"
#include "treelat/realize.hpp"

using namespace treelat;

namespace {

const Truncation &sample_truncation() {
  static const Truncation t = [] {
    auto spec = build_star_ray(4);
    for (std::size_t level = 1; level <= 6; ++level)
      spec = glue(spec, build_Bp(8, 4, 2), level);
    return canonical_indexing(spec, 3, 14);
  }();
  return t;
}

struct DistData {
  std::vector<std::uint32_t> dist;
  std::vector<Integer> value;
  std::vector<char> include;
};

const DistData &sample_distances() {
  static const DistData d = [] {
    const auto &t = sample_truncation();
    DistData out;
    out.dist = edge_distances(t.graph, t.base);
    auto o = compute_ordering(t.graph, t.base);
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v) {
      out.value.push_back(o.vertex(v).get_num());
      out.include.push_back(t.graph.vertex(v).part == Part::v0);
    }
    return out;
  }();
  return d;
}

void BM_BallCountsSerial(benchmark::State &st) {
  const auto &d = sample_distances();
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::ball_counts_serial(d.dist, 14, 2));
}

void BM_BallCountsParallel(benchmark::State &st) {
  const auto &d = sample_distances();
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::ball_counts_parallel(d.dist, 14, 2));
}

void BM_BallMaxSerial(benchmark::State &st) {
  const auto &d = sample_distances();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::ball_max_serial(d.dist, d.value, d.include, 14, 2));
}

void BM_BallMaxParallel(benchmark::State &st) {
  const auto &d = sample_distances();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::ball_max_parallel(d.dist, d.value, d.include, 14, 2));
}

void BM_CoverBallSerial(benchmark::State &st) {
  const auto &t = sample_truncation();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::cover_ball_serial(t.graph, t.base,
                                   static_cast<std::uint32_t>(st.range(0))));
}

void BM_CoverBallParallel(benchmark::State &st) {
  const auto &t = sample_truncation();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::cover_ball_parallel(t.graph, t.base,
                                     static_cast<std::uint32_t>(st.range(0))));
}

void BM_TowerSerial(benchmark::State &st) {
  auto tower = build_semidirect_tower(4, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::tower_check_serial(tower, tower.k() + 1));
}

void BM_TowerParallel(benchmark::State &st) {
  auto tower = build_semidirect_tower(4, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::tower_check_parallel(tower, tower.k() + 1));
}

} // namespace

BENCHMARK(BM_BallCountsSerial);
BENCHMARK(BM_BallCountsParallel);
BENCHMARK(BM_BallMaxSerial);
BENCHMARK(BM_BallMaxParallel);
BENCHMARK(BM_CoverBallSerial)->Arg(8)->Arg(12);
BENCHMARK(BM_CoverBallParallel)->Arg(8)->Arg(12);
BENCHMARK(BM_TowerSerial)->Arg(2)->Arg(4);
BENCHMARK(BM_TowerParallel)->Arg(2)->Arg(4);

BENCHMARK_MAIN();
