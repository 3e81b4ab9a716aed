#include <benchmark/benchmark.h>

#include <vector>

#include "covertlab/rng.hpp"
#include "covertlab/warden.hpp"

namespace {

std::vector<double> noise_block(std::size_t count) {
  covertlab::RandomStream rs(7, "bench_lrt");
  std::vector<double> y(count);
  covertlab::fill_gaussian(rs, y, 0.0, 1.0);
  return y;
}

// The likelihood-ratio sum is the inner loop of every AWGN detector trial;
// table vs exact is the difference between minutes and hours at sweep scale.
void BM_LrtTermExact(benchmark::State& state) {
  const covertlab::AwgnLrt lrt(0.01, 1.0, 1.0);
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrt.exact_term(y));
    y += 1e-6;
  }
}
BENCHMARK(BM_LrtTermExact);

void BM_LrtTermTable(benchmark::State& state) {
  const covertlab::AwgnLrt lrt(0.01, 1.0, 1.0);
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrt.term(y));
    y += 1e-6;
  }
}
BENCHMARK(BM_LrtTermTable);

void BM_LrtStatBulk(benchmark::State& state) {
  const covertlab::AwgnLrt lrt(0.01, 1.0, 1.0);
  const std::vector<double> y = noise_block(1 << 20);
  for (auto _ : state) benchmark::DoNotOptimize(lrt.stat(y));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_LrtStatBulk);

void BM_Radiometer(benchmark::State& state) {
  const std::vector<double> y = noise_block(1 << 20);
  for (auto _ : state) benchmark::DoNotOptimize(covertlab::radiometer_stat(y));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_Radiometer);

void BM_TableBuild(benchmark::State& state) {
  for (auto _ : state) {
    covertlab::AwgnLrt lrt(0.01, 1.0, 1.0);
    benchmark::DoNotOptimize(&lrt);
  }
}
BENCHMARK(BM_TableBuild);

}  // namespace

BENCHMARK_MAIN();
