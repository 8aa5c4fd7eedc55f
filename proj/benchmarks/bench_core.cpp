#include <benchmark/benchmark.h>

#include "coarselab/expansion.hpp"
#include "coarselab/hurewicz.hpp"
#include "coarselab/search.hpp"

using namespace coarselab;

namespace {

std::shared_ptr<FiniteQuotient> cycle(long long n) {
  return build_quotient(GroupSpec::free_abelian(1), SubgroupSpec::free_abelian({n}));
}

void BM_BallEnumeration(benchmark::State& state) {
  const auto spec = GroupSpec::baumslag_solitar(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball(spec, static_cast<int>(state.range(0)), 1u << 22));
  }
}
BENCHMARK(BM_BallEnumeration)->DenseRange(4, 8, 2);

void BM_BuildQuotient(benchmark::State& state) {
  const long long m = state.range(0), k = state.range(1);
  for (auto _ : state) {
    auto q = build_quotient(GroupSpec::baumslag_solitar(2), SubgroupSpec::baumslag_solitar(m, k), 1 << 20);
    benchmark::DoNotOptimize(q->diameter());
  }
}
BENCHMARK(BM_BuildQuotient)->Args({255, 8})->Args({4095, 12});

void BM_VerifyCover(benchmark::State& state) {
  auto q = build_quotient(GroupSpec::baumslag_solitar(2), SubgroupSpec::baumslag_solitar(255, 8));
  LevelSetup setup = make_level_setup(*q);
  const auto res = hurewicz_cover(setup.map, 1, setup.base_ctrl, setup.fiber_oracle, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_cover(*q, res.cover, 2, 1, res.r_out));
  }
}
BENCHMARK(BM_VerifyCover);

void BM_IterateExpand(benchmark::State& state) {
  auto q = cycle(state.range(0));
  const auto ctrl = interval_control(*q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_expand(*q, ctrl, 1, 3));
  }
}
BENCHMARK(BM_IterateExpand)->Arg(64)->Arg(1024);

void BM_HurewiczCover(benchmark::State& state) {
  auto q = build_quotient(GroupSpec::baumslag_solitar(2), SubgroupSpec::baumslag_solitar(15, 4));
  LevelSetup setup = make_level_setup(*q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hurewicz_cover(setup.map, 1, setup.base_ctrl, setup.fiber_oracle, 1, 1));
  }
}
BENCHMARK(BM_HurewiczCover);

void BM_BruteForceSearch(benchmark::State& state) {
  auto q = cycle(24);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_min_cover(*q, 1, 3, 3, 1u << 22));
  }
}
BENCHMARK(BM_BruteForceSearch);

}  // namespace

BENCHMARK_MAIN();
