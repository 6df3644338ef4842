// OpenMP kernels against their serial references.  Argument 0 selects the
// serial path, 1 the parallel one.
#include <benchmark/benchmark.h>

#include <random>

#include "dwkit/cochain.hpp"
#include "dwkit/dw.hpp"
#include "dwkit/linalg.hpp"

using namespace dwkit;

namespace {

Cochain random_cochain(const GroupPtr& g, int n, int64_t m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Cochain c(g, n, m);
  for (uint64_t k = 0; k < c.size(); ++k)
    if (!c.is_degenerate(k)) c.set_numerator(k, static_cast<int64_t>(rng() % m));
  return c;
}

void BM_Coboundary(benchmark::State& state) {
  static const Cochain c = random_cochain(pauli_group(), 3, 8, 1);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(coboundary(c, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}

// Schur complement phase of the elimination: P1, degree 2 -> 3 over Z/256,
// the matrix behind H^3(P1).
void BM_Elimination(benchmark::State& state) {
  static const IntMatrix a = coboundary_matrix(*pauli_group(), 3, 256);
  EliminationOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) {
    Elimination e(a, {}, opt);
    benchmark::DoNotOptimize(e.diagonal());
  }
  state.SetLabel(opt.parallel ? "openmp" : "serial");
}

void BM_TorusPartition(benchmark::State& state) {
  static const GroupPtr g = pauli_group();
  static const Cochain theta = Cochain(g, 3);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(dw_partition_torus(g, theta, 3, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}

void BM_TorusPartitionReference(benchmark::State& state) {
  static const GroupPtr g = pauli_group();
  static const Cochain theta = Cochain(g, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dw_partition_torus_reference(g, theta, 3));
}

}  // namespace

BENCHMARK(BM_Coboundary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Elimination)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TorusPartition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TorusPartitionReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
