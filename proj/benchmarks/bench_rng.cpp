#include <benchmark/benchmark.h>

#include <vector>

#include "covertlab/rng.hpp"

namespace {

void BM_NextU64(benchmark::State& state) {
  covertlab::RandomStream rs(1, "bench");
  for (auto _ : state) benchmark::DoNotOptimize(rs.next_u64());
}
BENCHMARK(BM_NextU64);

void BM_Gaussian(benchmark::State& state) {
  covertlab::RandomStream rs(1, "bench");
  for (auto _ : state) benchmark::DoNotOptimize(rs.gaussian());
}
BENCHMARK(BM_Gaussian);

void BM_FillGaussian(benchmark::State& state) {
  covertlab::RandomStream rs(1, "bench");
  std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    covertlab::fill_gaussian(rs, buf, 0.0, 1.0);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillGaussian)->Arg(1 << 16);

void BM_DeriveStream(benchmark::State& state) {
  covertlab::RandomStream rs(1, "bench");
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rs.derive(i++));
}
BENCHMARK(BM_DeriveStream);

// Slot selection via geometric gap skipping; cost tracks q*n, not n.
void BM_IndexSubset(benchmark::State& state) {
  covertlab::RandomStream rs(1, "bench");
  const std::uint64_t n = 1000000;
  const double q = 1e-3;
  for (auto _ : state) {
    auto slots = covertlab::sample_index_subset(rs, n, q);
    benchmark::DoNotOptimize(slots.data());
  }
}
BENCHMARK(BM_IndexSubset);

}  // namespace

BENCHMARK_MAIN();
