#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "covertlab/covert_awgn.hpp"
#include "covertlab/covert_bsc.hpp"
#include "covertlab/rng.hpp"
#include "covertlab/warden.hpp"

namespace {

using namespace covertlab;

struct AwgnFixture {
  SchemeParams params;
  SecretKey key;
  std::vector<double> received;

  AwgnFixture(EccMode ecc, std::uint64_t n, double q) {
    params.n = n;
    params.q = q;
    params.a = 1.0;
    params.ecc = ecc;
    RandomStream rng(11, "bench_decode");
    key = gen_key(params, rng);
    const std::uint64_t k = plan_capacity(params, key);
    std::vector<std::uint8_t> msg(k);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    received = encode_slot_values(msg, key, params);
    for (double& v : received) v += rng.gaussian();
  }
};

void BM_RepetitionDecode(benchmark::State& state) {
  AwgnFixture f(Repetition{10}, 1u << 20, 1e-3);  // about 1000 slots
  for (auto _ : state)
    benchmark::DoNotOptimize(decode_slots(f.received, f.key, f.params));
}
BENCHMARK(BM_RepetitionDecode);

void BM_MlDecode(benchmark::State& state) {
  AwgnFixture f(MlCodebook{8, 2024}, 64, 1.0);  // 256 codewords x 64 slots
  for (auto _ : state)
    benchmark::DoNotOptimize(decode_slots(f.received, f.key, f.params));
}
BENCHMARK(BM_MlDecode);

struct BscFixture {
  LowWeightCodebook codebook;
  std::vector<std::uint8_t> received;

  BscFixture() {
    codebook = gen_codebook(10000, 8, 0.01, 77);
    RandomStream rng(12, "bench_decode_bsc");
    received = bsc_encode(42, codebook);
    for (auto& b : received)
      if (rng.bernoulli(0.05)) b ^= 1;
  }
};

void BM_BscDecode(benchmark::State& state) {
  BscFixture f;
  for (auto _ : state)
    benchmark::DoNotOptimize(bsc_decode(f.received, f.codebook, 0.05));
}
BENCHMARK(BM_BscDecode);

void BM_BscMixtureStat(benchmark::State& state) {
  BscFixture f;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bsc_mixture_lrt_stat(f.received, f.codebook, 0.2));
}
BENCHMARK(BM_BscMixtureStat);

}  // namespace

BENCHMARK_MAIN();
