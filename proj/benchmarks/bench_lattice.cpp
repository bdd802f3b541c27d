#include <benchmark/benchmark.h>

#include "permlat/lattice.hpp"
#include "permlat/ultrametric.hpp"

using namespace permlat;

static void BM_EnumerateLattices(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_lattices(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_EnumerateLattices)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

static void BM_IsDistributive(benchmark::State& state) {
  const std::vector<FiniteLattice> lattices = enumerate_lattices(7);
  for (auto _ : state) {
    for (const auto& lat : lattices) benchmark::DoNotOptimize(is_distributive(lat));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(lattices.size()));
}
BENCHMARK(BM_IsDistributive);

static void BM_DimensionBounds(benchmark::State& state) {
  const FiniteLattice lat = make_boolean(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dimension_bounds(lat));
}
BENCHMARK(BM_DimensionBounds)->DenseRange(2, 4);

static void BM_AmalgamSweep(benchmark::State& state) {
  // Every one-point amalgam over every 2-point base.
  const LatticeRef lat = share(product(make_chain(2), make_chain(3)));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_space(lat, 2, [&](const LambdaSpace& base) {
      for_each_extension(base, [&](std::span<const Elem> e1) {
        LambdaSpace f1 = base;
        f1.add_point(10, e1);
        for_each_extension(base, [&](std::span<const Elem> e2) {
          LambdaSpace f2 = base;
          f2.add_point(20, e2);
          benchmark::DoNotOptimize(canonical_amalgam(base, f1, f2));
          ++count;
          return true;
        });
        return true;
      });
      return true;
    });
    state.counters["amalgams"] = static_cast<double>(count);
  }
}
BENCHMARK(BM_AmalgamSweep)->Unit(benchmark::kMillisecond);
