#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "covertlab/channels.hpp"
#include "covertlab/errors.hpp"
#include "covertlab/rng.hpp"

using namespace covertlab;

TEST_CASE("awgn_apply adds noise of the requested power") {
  auto s = make_rng(1, "awgn");
  std::vector<double> x(200000, 0.25);

  SUBCASE("near-noiseless channel is the identity to 1e-4") {
    auto y = awgn_apply(x, AwgnParams(1e-12), s);
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < 1000; ++i) CHECK(std::abs(y[i] - 0.25) < 1e-4);
  }

  SUBCASE("empirical mean and variance match") {
    auto y = awgn_apply(x, AwgnParams(2.0), s);
    double sum = 0.0, sumsq = 0.0;
    for (double v : y) {
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / y.size();
    const double var = sumsq / y.size() - mean * mean;
    CHECK(std::abs(mean - 0.25) < 5.0 * std::sqrt(2.0 / y.size()));
    CHECK(std::abs(var - 2.0) < 5.0 * 2.0 * std::sqrt(2.0 / y.size()));
  }

  SUBCASE("memoryless: lag-1 autocorrelation is noise-level") {
    auto y = awgn_apply(std::vector<double>(100000, 0.0), AwgnParams(1.0), s);
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) c += y[i] * y[i + 1];
    c /= y.size();
    CHECK(std::abs(c) < 4.0 / std::sqrt(static_cast<double>(y.size())));
  }

  CHECK_THROWS_AS(AwgnParams(0.0), InvalidParameter);
  CHECK_THROWS_AS(AwgnParams(-1.0), InvalidParameter);
}

TEST_CASE("bsc_apply flips at rate p and honors the deterministic ends") {
  auto s = make_rng(2, "bsc");
  std::vector<std::uint8_t> zeros(100000, 0);

  auto id = bsc_apply(zeros, BscParams(0.0), s);
  CHECK(std::count(id.begin(), id.end(), 1) == 0);

  auto comp = bsc_apply(zeros, BscParams(1.0), s);
  CHECK(std::count(comp.begin(), comp.end(), 1) ==
        static_cast<long>(zeros.size()));

  auto flipped = bsc_apply(zeros, BscParams(0.1), s);
  const double rate =
      static_cast<double>(std::count(flipped.begin(), flipped.end(), 1)) /
      flipped.size();
  CHECK(std::abs(rate - 0.1) < 5.0 * std::sqrt(0.1 * 0.9 / flipped.size()));

  std::vector<std::uint8_t> notbits{0, 2, 1};
  CHECK_THROWS_AS(bsc_apply(notbits, BscParams(0.1), s), InvalidInput);
  CHECK_THROWS_AS(BscParams(1.2), InvalidParameter);
}

TEST_CASE("dmc_apply with a BSC-shaped matrix matches bsc_apply in distribution") {
  // Two-sample test on flip counts at the 99% level.
  const double p = 0.13;
  const std::size_t n = 200000;
  Dmc ch;
  ch.inputs = 2;
  ch.outputs = 2;
  ch.no_tx_index = 0;
  ch.probs = {1.0 - p, p, p, 1.0 - p};
  ch.validate();

  auto s1 = make_rng(3, "viaDMC");
  auto s2 = make_rng(4, "viaBSC");
  std::vector<std::uint32_t> in_dmc(n, 0);
  auto out_dmc = dmc_apply(in_dmc, ch, s1);
  const double flips_dmc = std::count(out_dmc.begin(), out_dmc.end(), 1u);

  std::vector<std::uint8_t> in_bsc(n, 0);
  auto out_bsc = bsc_apply(in_bsc, BscParams(p), s2);
  const double flips_bsc = std::count(out_bsc.begin(), out_bsc.end(), 1);

  const double p1 = flips_dmc / n, p2 = flips_bsc / n;
  const double pooled = (flips_dmc + flips_bsc) / (2.0 * n);
  const double z =
      (p1 - p2) / std::sqrt(2.0 * pooled * (1.0 - pooled) / n);
  CHECK(std::abs(z) < 2.576);  // 99% two-sided
}

TEST_CASE("dmc_apply validates symbols and matrices") {
  Dmc ch;
  ch.inputs = 2;
  ch.outputs = 3;
  ch.no_tx_index = 0;
  ch.probs = {0.5, 0.25, 0.25, 0.1, 0.4, 0.5};
  ch.validate();

  auto s = make_rng(5);
  std::vector<std::uint32_t> bad{0, 2};
  CHECK_THROWS_AS(dmc_apply(bad, ch, s), InvalidInput);

  Dmc rowsum = ch;
  rowsum.probs[0] = 0.6;  // row 0 now sums to 1.1
  CHECK_THROWS_AS(rowsum.validate(), InvalidParameter);

  Dmc badidx = ch;
  badidx.no_tx_index = 2;
  CHECK_THROWS_AS(badidx.validate(), InvalidParameter);

  // Empirical row frequencies follow the matrix.
  std::vector<std::uint32_t> ones(120000, 1);
  auto out = dmc_apply(ones, ch, s);
  double c0 = 0, c1 = 0, c2 = 0;
  for (auto v : out) (v == 0 ? c0 : v == 1 ? c1 : c2) += 1.0;
  CHECK(std::abs(c0 / out.size() - 0.1) < 0.01);
  CHECK(std::abs(c1 / out.size() - 0.4) < 0.01);
  CHECK(std::abs(c2 / out.size() - 0.5) < 0.01);
}

TEST_CASE("dmc text round trip and error reporting") {
  const char* text =
      "2 2 0\n"
      "0.9 0.1\n"
      "0.2 0.8\n";
  std::istringstream in(text);
  const Dmc ch = dmc_parse(in);
  CHECK(ch.inputs == 2);
  CHECK(ch.outputs == 2);
  CHECK(ch.no_tx_index == 0);
  CHECK(ch.at(0, 1) == doctest::Approx(0.1));

  std::istringstream trunc("2 2 0\n0.9 0.1\n0.2\n");
  CHECK_THROWS_AS(dmc_parse(trunc), InvalidInput);

  std::istringstream badhdr("x 2 0\n");
  CHECK_THROWS_AS(dmc_parse(badhdr), InvalidInput);

  // File path: write, load, and check a missing file raises IoError.
  const char* path = "dmc_roundtrip_test.txt";
  {
    std::ofstream out(path);
    out << text;
  }
  const Dmc loaded = dmc_load_file(path);
  CHECK(loaded.at(1, 0) == doctest::Approx(0.2));
  std::remove(path);
  CHECK_THROWS_AS(dmc_load_file("definitely_missing_dmc.txt"), IoError);
}
