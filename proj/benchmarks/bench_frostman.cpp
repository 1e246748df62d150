// Micro-benchmarks for the hot paths: tree realization, per-level statistics,
// the cover-cost recurrence, measure construction, and ball-mass queries.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include <frostman/cascade.hpp>
#include <frostman/estimators.hpp>
#include <frostman/occupancy_tree.hpp>
#include <frostman/set_models.hpp>
#include <frostman/verify.hpp>

namespace {

frostman::OccupancyTree digit_tree(int depth) {
  return frostman::realize(frostman::DigitSetSpec{4, {{0, 3}}}, depth);
}

void bm_realize_digit(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto tree = digit_tree(depth);
    benchmark::DoNotOptimize(tree.total_nodes());
  }
}
BENCHMARK(bm_realize_digit)->Arg(16)->Arg(24);

void bm_realize_sequence(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto tree = frostman::realize(frostman::SequenceSetSpec{1.0}, depth);
    benchmark::DoNotOptimize(tree.total_nodes());
  }
}
BENCHMARK(bm_realize_sequence)->Arg(20)->Arg(28);

void bm_level_counts(benchmark::State& state) {
  const auto tree = digit_tree(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto counts = frostman::level_counts(tree);
    benchmark::DoNotOptimize(counts.occupied.back());
  }
}
BENCHMARK(bm_level_counts)->Arg(24);

void bm_cover_cost(benchmark::State& state) {
  const auto tree = digit_tree(24);
  for (auto _ : state)
    benchmark::DoNotOptimize(frostman::cover_cost(tree, 0.5, 4, static_cast<int>(state.range(0))));
}
BENCHMARK(bm_cover_cost)->Arg(12)->Arg(24);

void bm_construct(benchmark::State& state) {
  const auto tree = digit_tree(24);
  for (auto _ : state) {
    auto res = frostman::construct(tree, 0.5, 1.0 / 64, 0.3, 0.4);
    benchmark::DoNotOptimize(res.total_mass);
  }
}
BENCHMARK(bm_construct);

void bm_ball_mass(benchmark::State& state) {
  const auto tree = digit_tree(24);
  const auto res = frostman::construct(tree, 0.5, 1.0 / 64, 0.3, 0.4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::uniform_real_distribution<double> ur(-20.0, -2.0);
  for (auto _ : state) {
    const std::vector<double> x{ux(rng)};
    benchmark::DoNotOptimize(frostman::ball_mass(res.measure, x, std::exp2(ur(rng))));
  }
}
BENCHMARK(bm_ball_mass);

}  // namespace

BENCHMARK_MAIN();
