#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "covertlab/errors.hpp"
#include "covertlab/rng.hpp"

using covertlab::InvalidParameter;
using covertlab::make_rng;
using covertlab::RandomStream;

TEST_CASE("same seed and substream reproduce the same sequence") {
  auto a = make_rng(1, "noise");
  auto b = make_rng(1, "noise");
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds or substreams give different sequences") {
  auto a = make_rng(1, "a");
  auto b = make_rng(2, "a");
  auto c = make_rng(1, "b");
  int same_ab = 0, same_ac = 0;
  auto a2 = a;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    if (x == b.next_u64()) ++same_ab;
    if (a2.next_u64() == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("derive depends on stream identity, not position") {
  auto parent = make_rng(7, "exp");
  auto child_before = parent.derive("trial");
  for (int i = 0; i < 1000; ++i) parent.next_u64();
  auto child_after = parent.derive("trial");
  for (int i = 0; i < 16; ++i)
    CHECK(child_before.next_u64() == child_after.next_u64());
  // index-derived children are distinct per index
  auto d0 = parent.derive(std::uint64_t{0});
  auto d1 = parent.derive(std::uint64_t{1});
  CHECK(d0.next_u64() != d1.next_u64());
}

TEST_CASE("uniform01 lies in [0,1) with the right first two moments") {
  auto s = make_rng(11, "u01");
  const std::size_t n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = s.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // LLN oracle: mean 1/2 (sd of the estimate 2.9e-4), var 1/12.
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.001);
}

TEST_CASE("gaussian sampling matches N(0,1) moments and decile masses") {
  auto s = make_rng(3, "gauss");
  const std::size_t n = 1000000;
  // Decile edges of the standard normal (Phi^{-1}(k/10)), frozen.
  const double edges[9] = {-1.2815515655446004, -0.8416212335729143,
                           -0.5244005127080407, -0.2533471031357997,
                           0.0,
                           0.2533471031357997,  0.5244005127080407,
                           0.8416212335729143,  1.2815515655446004};
  std::uint64_t bins[10] = {0};
  double sum = 0.0, sumsq = 0.0, sumcube = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = s.gaussian();
    sum += g;
    sumsq += g * g;
    sumcube += g * g * g;
    int b = 0;
    while (b < 9 && g > edges[b]) ++b;
    ++bins[b];
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(sumcube / n) < 0.02);  // skewness ~ N(0, 15/n)
  // chi-square GOF across deciles, 9 dof; 33.7 is the 1e-4 tail
  double chi2 = 0.0;
  for (auto b : bins) {
    const double e = n / 10.0;
    chi2 += (b - e) * (b - e) / e;
  }
  CHECK(chi2 < 33.7);
}

TEST_CASE("gaussian tail mass beyond 3 sigma is right") {
  auto s = make_rng(17, "tail");
  const std::size_t n = 2000000;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(s.gaussian()) > 3.0) ++hits;
  // 2Q(3) = 2.6998e-3; sd of the count ~ sqrt(n p) = 73
  const double expect = 2.0 * 0.0013498980316300946 * n;
  CHECK(std::abs(static_cast<double>(hits) - expect) < 6.0 * std::sqrt(expect));
}

TEST_CASE("substreams show no cross-correlation at 1e5 samples") {
  auto master = make_rng(5);
  auto a = master.derive("left");
  auto b = master.derive("right");
  const std::size_t n = 100000;
  double sa = 0.0, sb = 0.0, sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a.uniform01(), y = b.uniform01();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) *
                                      (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(corr) < 0.015);  // CI noise band, 1/sqrt(n) ~ 3.2e-3
}

TEST_CASE("sample_gaussian handles edge variances") {
  auto s = make_rng(9);
  auto v = covertlab::sample_gaussian(s, 7.0, 0.0, 100);
  for (double x : v) CHECK(x == 7.0);
  CHECK_THROWS_AS(covertlab::sample_gaussian(s, 0.0, -1.0, 4), InvalidParameter);
}

TEST_CASE("sample_bernoulli respects p and validates it") {
  auto s = make_rng(13);
  auto zeros = covertlab::sample_bernoulli(s, 0.0, 1000);
  auto ones = covertlab::sample_bernoulli(s, 1.0, 1000);
  CHECK(std::count(zeros.begin(), zeros.end(), 1) == 0);
  CHECK(std::count(ones.begin(), ones.end(), 1) == 1000);
  std::size_t heads = 0;
  const std::size_t n = 200000;
  for (std::size_t i = 0; i < n; ++i) heads += s.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(static_cast<double>(heads) / n - 0.3) < 5.0 * std::sqrt(0.3 * 0.7 / n));
  CHECK_THROWS_AS(covertlab::sample_bernoulli(s, 1.5, 4), InvalidParameter);
}

TEST_CASE("sample_index_subset edge cases and density") {
  auto s = make_rng(21, "subset");
  CHECK(covertlab::sample_index_subset(s, 4, 1.0) ==
        std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(covertlab::sample_index_subset(s, 1000, 0.0).empty());

  // Bernoulli(q) equivalence: per-key size is Binomial(n, q); with n=1e6 and
  // q=1e-3 the 3-sigma band is [905, 1095]. Also check the mean over keys.
  const std::uint64_t n = 1000000;
  const double q = 1e-3;
  double total = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    auto sub = s.derive(static_cast<std::uint64_t>(rep));
    const auto idx = covertlab::sample_index_subset(sub, n, q);
    REQUIRE(idx.size() > 900);
    REQUIRE(idx.size() < 1100);
    REQUIRE(std::is_sorted(idx.begin(), idx.end()));
    REQUIRE(idx.back() < n);
    total += static_cast<double>(idx.size());
  }
  const double mean_size = total / 50.0;
  CHECK(std::abs(mean_size - 1000.0) < 5.0 * std::sqrt(1000.0 / 50.0));
}

TEST_CASE("subset sampling agrees with naive per-index flips in distribution") {
  // Same (n, q), two different mechanisms; compare occupancy over many draws.
  const std::uint64_t n = 200;
  const double q = 0.15;
  const int reps = 4000;
  auto fast = make_rng(31, "fast");
  auto naive = make_rng(32, "naive");
  double fast_total = 0.0, naive_total = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto fs = fast.derive(static_cast<std::uint64_t>(r));
    fast_total += static_cast<double>(covertlab::sample_index_subset(fs, n, q).size());
    auto ns = naive.derive(static_cast<std::uint64_t>(r));
    int count = 0;
    for (std::uint64_t i = 0; i < n; ++i) count += ns.bernoulli(q) ? 1 : 0;
    naive_total += count;
  }
  const double sd_of_mean = std::sqrt(n * q * (1 - q) / reps);
  CHECK(std::abs(fast_total / reps - n * q) < 5.0 * sd_of_mean);
  CHECK(std::abs(fast_total / reps - naive_total / reps) < 7.0 * sd_of_mean);
}
