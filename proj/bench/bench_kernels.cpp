// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "saw/enumerate.hpp"
#include "saw/renewal.hpp"
#include "saw/rng.hpp"
#include "saw/sampler.hpp"

namespace {

using namespace saw;

void BM_EnumerateSerial(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_counts_serial(2, cutoff, WalkClass::All));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_counts(2, cutoff, WalkClass::All));
}

const StepLaw& law() {
  static const StepLaw l = [] {
    const CountTable irr = enumerate_counts(2, 12, WalkClass::IrreducibleBridge);
    return build_step_law(irr, 1.2, calibrate_mass(irr, 1.2));
  }();
  return l;
}

void BM_PartitionSerial(benchmark::State& state) {
  const Coord n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dp_partition_serial(law(), n, default_box_radius(law(), n)));
}

void BM_PartitionParallel(benchmark::State& state) {
  const Coord n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dp_partition(law(), n, default_box_radius(law(), n)));
}

void BM_SampleEnsemble(benchmark::State& state) {
  const Coord n = 400;
  const SkeletonSampler sampler(law(), dp_partition(law(), n, default_box_radius(law(), n)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_ensemble(sampler, stream_key(1, n), state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnumerateSerial)->DenseRange(12, 16, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->DenseRange(12, 16, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleEnsemble)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
