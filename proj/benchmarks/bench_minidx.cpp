#include <benchmark/benchmark.h>

#include "minidx/minindex.hpp"
#include "minidx/multimatrix.hpp"
#include "minidx/realize.hpp"
#include "minidx/spectral.hpp"

namespace {

minidx::DimensionMatrix path_matrix(Eigen::Index n) {
  // Bipartite path: index approaches 4 from below as n grows.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 1.0;
    if (i + 1 < n) d(i, i + 1) = 1.0;
  }
  return minidx::DimensionMatrix(d);
}

void BM_PfData(benchmark::State& state) {
  const auto d = path_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minidx::pf_data(d));
}
BENCHMARK(BM_PfData)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateConnected(benchmark::State& state) {
  const minidx::EnumerationBounds bounds{static_cast<int>(state.range(0)), 3, 8};
  for (auto _ : state) benchmark::DoNotOptimize(minidx::enumerate_connected(bounds));
}
BENCHMARK(BM_EnumerateConnected)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MinimizeIndex(benchmark::State& state) {
  minidx::IntVector k(2), h(1);
  k << 1, 2;
  h << 3;
  minidx::IntMatrix l(1, 2);
  l << 1, 1;
  const auto c = minidx::realize_inclusion(minidx::validate_bratteli(k, h, l));
  for (auto _ : state) {
    benchmark::DoNotOptimize(minidx::minimize_index_numerically(c, static_cast<int>(state.range(0)), 7));
  }
}
BENCHMARK(BM_MinimizeIndex)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
