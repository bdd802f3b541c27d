#include <benchmark/benchmark.h>

#include "permlat/generic.hpp"
#include "permlat/perm.hpp"

using namespace permlat;

namespace {

LatticeRef catalog_lattice(int64_t which) {
  switch (which) {
    case 0: return share(make_chain(3));
    case 1: return share(make_boolean(2));
    default: return share(product(make_chain(2), make_chain(3)));
  }
}

OrderedLambdaStructure sample(int64_t which, std::size_t size) {
  const LatticeRef lat = catalog_lattice(which);
  return generate_generic(lat, catalog_signature(*lat), {1, size, 2}).structure;
}

}  // namespace

static void BM_GenerateGeneric(benchmark::State& state) {
  const LatticeRef lat = catalog_lattice(state.range(0));
  const std::vector<OrderSpec> sig = catalog_signature(*lat);
  const auto size = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(generate_generic(lat, sig, {1, size, 2}));
}
BENCHMARK(BM_GenerateGeneric)->ArgsProduct({{0, 1, 2}, {20, 40}})->Unit(benchmark::kMillisecond);

static void BM_ExtensionCheck(benchmark::State& state) {
  const OrderedLambdaStructure s = sample(1, 40);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extension_property_check(s, k));
}
BENCHMARK(BM_ExtensionCheck)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_HomogeneityCheck(benchmark::State& state) {
  const OrderedLambdaStructure s = sample(1, 40);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(homogeneity_check(s, m));
}
BENCHMARK(BM_HomogeneityCheck)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_EncodeDecode(benchmark::State& state) {
  const OrderedLambdaStructure s = sample(state.range(0), 50);
  for (auto _ : state) {
    const EncodeResult e = encode_orders(s);
    benchmark::DoNotOptimize(decode_relations(e.perm));
  }
}
BENCHMARK(BM_EncodeDecode)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_Profile(benchmark::State& state) {
  const PermStructure p = encode_orders(sample(1, 50)).perm;
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(profile(p, k));
}
BENCHMARK(BM_Profile)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
