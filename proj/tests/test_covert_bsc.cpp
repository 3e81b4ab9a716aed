#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "covertlab/channels.hpp"
#include "covertlab/covert_bsc.hpp"
#include "covertlab/errors.hpp"
#include "covertlab/rng.hpp"

using covertlab::bsc_decode;
using covertlab::bsc_encode;
using covertlab::gen_codebook;
using covertlab::InvalidInput;
using covertlab::InvalidParameter;
using covertlab::LowWeightCodebook;
using covertlab::make_rng;
using covertlab::plan_k;

namespace {

std::uint64_t hamming(const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Exhaustive BSC likelihood maximization, written independently of the library
// decoder: log P(y | row) = wt(y xor row) * log(p/(1-p)) + const, so the
// winner is the row maximizing that sum, ties to the lowest index.
std::uint64_t oracle_ml(const std::vector<std::uint8_t>& y,
                        const LowWeightCodebook& cb, double p_b) {
  const double llr = std::log(p_b / (1.0 - p_b));  // negative for p_b < 1/2
  double best_ll = -1e300;
  std::uint64_t best = 0;
  for (std::uint64_t r = 0; r < cb.row_count(); ++r) {
    const auto dense = bsc_encode(r, cb);
    const double ll = static_cast<double>(hamming(y, dense)) * llr;
    if (ll > best_ll) {
      best_ll = ll;
      best = r;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("plan_k frozen values and sqrt growth") {
  // p_b = 0.05, q_c = 1/sqrt(n): gamma = 2 sqrt(.05*.95) = 0.43589.
  CHECK(plan_k(1000, 1.0 / std::sqrt(1000.0), 0.05) == 47);
  CHECK(plan_k(10000, 0.01, 0.05) == 158);
  CHECK(plan_k(100000, 1.0 / std::sqrt(100000.0), 0.05) == 510);
  // decade ratios 3.36 and 3.23: sqrt(10) up to the additive log(1/target)
  CHECK(158.0 / 47.0 > 2.4);
  CHECK(158.0 / 47.0 < 4.0);
  CHECK(510.0 / 158.0 > 2.4);
  CHECK(510.0 / 158.0 < 4.0);

  CHECK(plan_k(400, 0.05, 0.2) == 7);
  CHECK(plan_k(1000, 0.0, 0.05) == 0);  // zero-weight rows carry nothing
  CHECK_THROWS_AS(plan_k(1000, 0.6, 0.05), InvalidParameter);
  CHECK_THROWS_AS(plan_k(1000, 0.1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(plan_k(1000, 0.1, 0.05, 0.0), InvalidParameter);
}

TEST_CASE("gen_codebook shape, determinism, and density") {
  auto cb = gen_codebook(10000, 8, 0.01, 424242);
  REQUIRE(cb.rows.size() == 256);
  CHECK(!cb.degenerate);
  CHECK(!cb.has_duplicate_rows);

  // every row weight inside 5 sigma of n*q_c = 100 (sigma ~= 9.95)
  double mean_weight = 0.0;
  for (const auto& row : cb.rows) {
    CHECK(row.size() >= 50);
    CHECK(row.size() <= 150);
    mean_weight += static_cast<double>(row.size());
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] > row[i - 1]);
  }
  mean_weight /= 256.0;
  CHECK(mean_weight > 80.0);
  CHECK(mean_weight < 120.0);

  // bit-exact reconstruction from the tuple
  auto cb2 = gen_codebook(10000, 8, 0.01, 424242);
  CHECK(cb2.rows == cb.rows);
  auto cb3 = gen_codebook(10000, 8, 0.01, 424243);
  CHECK(cb3.rows != cb.rows);

  // degenerate corners
  auto single = gen_codebook(100, 0, 0.05, 1);
  CHECK(single.rows.size() == 1);
  auto zeros = gen_codebook(100, 3, 0.0, 1);
  CHECK(zeros.degenerate);
  for (const auto& row : zeros.rows) CHECK(row.empty());

  CHECK_THROWS_AS(gen_codebook(100, 17, 0.05, 1), InvalidParameter);
  CHECK_THROWS_AS(gen_codebook(100, 3, 0.6, 1), InvalidParameter);
  CHECK_THROWS_AS(gen_codebook(0, 3, 0.05, 1), InvalidParameter);
}

TEST_CASE("bsc_encode produces the indexed row") {
  auto cb = gen_codebook(500, 4, 0.05, 7);
  auto x = bsc_encode(0, cb);
  REQUIRE(x.size() == 500);
  std::uint64_t weight = 0;
  for (std::size_t i = 0; i < x.size(); ++i) weight += x[i];
  CHECK(weight == cb.rows[0].size());
  for (std::uint32_t pos : cb.rows[0]) CHECK(x[pos] == 1);

  // all rows pairwise distinct at this config
  for (std::uint64_t r = 1; r < cb.row_count(); ++r)
    CHECK(cb.rows[r] != cb.rows[0]);
  CHECK(!cb.has_duplicate_rows);

  CHECK_THROWS_AS(bsc_encode(16, cb), InvalidInput);
}

TEST_CASE("noiseless loopback over all messages") {
  auto cb = gen_codebook(1000, 8, 0.05, 99);
  REQUIRE(!cb.degenerate);
  for (std::uint64_t msg = 0; msg < 256; ++msg)
    CHECK(bsc_decode(bsc_encode(msg, cb), cb, 0.0) == msg);
}

TEST_CASE("single bit flip stays inside the decoding radius") {
  auto cb = gen_codebook(200, 4, 0.05, 321);
  // scenario precondition: pairwise minimum distance at least 3
  std::uint64_t min_d = 200;
  for (std::uint64_t i = 0; i < cb.row_count(); ++i)
    for (std::uint64_t j = i + 1; j < cb.row_count(); ++j)
      min_d = std::min(min_d, hamming(bsc_encode(i, cb), bsc_encode(j, cb)));
  REQUIRE(min_d >= 3);

  for (std::uint64_t msg = 0; msg < cb.row_count(); ++msg) {
    for (std::size_t flip : {std::size_t{0}, std::size_t{100}, std::size_t{199}}) {
      auto y = bsc_encode(msg, cb);
      y[flip] ^= 1;
      CHECK(bsc_decode(y, cb, 0.1) == msg);
    }
  }
}

TEST_CASE("decoder matches exhaustive likelihood maximization") {
  // arbitrary received words, not codewords: the two rules must agree exactly
  auto cb = gen_codebook(500, 6, 0.05, 2718);
  auto rng = make_rng(15, "ml_equiv");
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<std::uint8_t> y(500);
    for (auto& b : y) b = rng.bernoulli(0.3);
    CHECK(bsc_decode(y, cb, 0.1) == oracle_ml(y, cb, 0.1));
  }
}

TEST_CASE("block error agrees with the brute-force oracle") {
  // operating point chosen noisy enough that errors actually occur
  auto cb = gen_codebook(400, 6, 0.05, 1137);
  REQUIRE(!cb.degenerate);
  const double p_b = 0.2;
  covertlab::BscParams ch{p_b};
  auto rng = make_rng(44, "bsc_block");
  int lib_errors = 0, oracle_errors = 0, disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto tr = rng.derive(static_cast<std::uint64_t>(trial));
    const std::uint64_t msg = tr.next_u64() & 63;
    auto y = covertlab::bsc_apply(bsc_encode(msg, cb), ch, tr);
    const auto lib = bsc_decode(y, cb, p_b);
    const auto ora = oracle_ml(y, cb, p_b);
    lib_errors += lib != msg;
    oracle_errors += ora != msg;
    disagreements += lib != ora;
  }
  CHECK(disagreements == 0);
  CHECK(lib_errors == oracle_errors);
  CHECK(lib_errors > 0);    // informative operating point...
  CHECK(lib_errors < 500);  // ...but far from guessing
}

TEST_CASE("light rows decode reliably at the planned operating point") {
  // n = 1e4, k = 8, q_c = 0.01, p_b = 0.05: the planner allows k up to 158,
  // so k = 8 should be deep inside the reliable regime.
  auto cb = gen_codebook(10000, 8, 0.01, 5555);
  covertlab::BscParams ch{0.05};
  auto rng = make_rng(46, "bsc_easy");
  int errors = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto tr = rng.derive(static_cast<std::uint64_t>(trial));
    const std::uint64_t msg = tr.next_u64() & 255;
    auto y = covertlab::bsc_apply(bsc_encode(msg, cb), ch, tr);
    errors += bsc_decode(y, cb, 0.05) != msg;
  }
  CHECK(errors <= 4);  // point estimate ~0; 2% headroom
}

TEST_CASE("degenerate all-zero codebook decodes deterministically") {
  auto cb = gen_codebook(50, 2, 0.0, 9);
  REQUIRE(cb.degenerate);
  std::vector<std::uint8_t> y(50, 0);
  y[3] = 1;
  CHECK(bsc_decode(y, cb, 0.1) == 0);  // all rows tie; lowest index wins
}

TEST_CASE("bsc_decode validates inputs") {
  auto cb = gen_codebook(100, 2, 0.05, 12);
  std::vector<std::uint8_t> y(99, 0);
  CHECK_THROWS_AS(bsc_decode(y, cb, 0.1), InvalidInput);
  y.assign(100, 0);
  y[0] = 2;
  CHECK_THROWS_AS(bsc_decode(y, cb, 0.1), InvalidInput);
  CHECK_THROWS_AS(bsc_decode(std::vector<std::uint8_t>(100, 0), cb, 0.5),
                  InvalidParameter);
}
