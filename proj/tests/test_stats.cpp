#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "covertlab/errors.hpp"
#include "covertlab/rng.hpp"
#include "covertlab/stats.hpp"

using namespace covertlab;

namespace {

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately take a different route than the
// library (direct summation, closed forms) so agreement is meaningful.
// ---------------------------------------------------------------------------

// Oracle: binomial CDF by direct summation with exact multiplicative
// binomial coefficients.
double binomial_cdf_direct(unsigned n, double p, unsigned k) {
  double total = 0.0;
  for (unsigned j = 0; j <= k; ++j) {
    double c = 1.0;
    for (unsigned i = 0; i < j; ++i) c *= static_cast<double>(n - i) / (i + 1);
    total += c * std::pow(p, j) * std::pow(1.0 - p, n - j);
  }
  return total;
}

// Oracle: closed-form KL between scalar Gaussians, in nats.
double gaussian_kl_closed(double m0, double v0, double m1, double v1) {
  return 0.5 * (v0 / v1 + (m0 - m1) * (m0 - m1) / v1 - 1.0 + std::log(v1 / v0));
}

}  // namespace

TEST_CASE("binomial_cdf matches the direct-summation oracle") {
  // Frozen oracle value first (computed by the routine above as well).
  const double frozen = 0.4163708294474809;
  CHECK(binomial_cdf_direct(20, 0.3, 5) == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(binomial_cdf(20, 0.3, 5) == doctest::Approx(frozen).epsilon(1e-9));
  // Sweep a grid of (n, p, k) against the oracle.
  for (unsigned n : {1u, 2u, 7u, 40u, 100u}) {
    for (double p : {0.02, 0.3, 0.5, 0.77}) {
      for (unsigned k = 0; k < n; k += (n / 7) + 1) {
        const double want = binomial_cdf_direct(n, p, k);
        CHECK(binomial_cdf(n, p, k) ==
              doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("binomial_cdf edge and large-n properties") {
  CHECK(binomial_cdf(0, 0.4, 0) == 1.0);
  CHECK(binomial_cdf(10, 0.0, 0) == 1.0);
  CHECK(binomial_cdf(10, 1.0, 9) == 0.0);
  CHECK(binomial_cdf(10, 1.0, 10) == 1.0);
  CHECK(binomial_cdf(1000000, 0.25, 1000000) == 1.0);  // exactly
  CHECK_THROWS_AS(binomial_cdf(5, 1.5, 2), InvalidParameter);

  // Nondecreasing in k across the whole support.
  double prev = 0.0;
  for (unsigned k = 0; k <= 20; ++k) {
    const double c = binomial_cdf(20, 0.3, k);
    CHECK(c >= prev);
    prev = c;
  }

  // Cross-route identity at n = 1e7: CDF_{n,p}(k) = 1 - CDF_{n,1-p}(n-k-1).
  const std::uint64_t n = 10000000;
  for (double p : {0.3, 0.001}) {
    for (std::uint64_t k :
         {static_cast<std::uint64_t>(n * p), static_cast<std::uint64_t>(n * p + 3000),
          static_cast<std::uint64_t>(n * p * 0.99)}) {
      const double a = binomial_cdf(n, p, k);
      const double b = 1.0 - binomial_cdf(n, 1.0 - p, n - k - 1);
      CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
  }
  // Median sanity at huge n: CDF at the mean is ~1/2.
  CHECK(binomial_cdf(10000000, 0.5, 5000000) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("wilson_interval reproduces the textbook evaluation") {
  // Frozen: Wilson for 50/100 at 95%.
  const auto iv = wilson_interval(50, 100, 0.95);
  CHECK(iv.lo == doctest::Approx(0.4038315303659956).epsilon(1e-9));
  CHECK(iv.hi == doctest::Approx(0.5961684696340044).epsilon(1e-9));
  // Oracle route: explicit algebra with z = Phi^{-1}(0.975).
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / 100.0;
  const double hw = z * std::sqrt(0.25 / 100.0 + z * z / 40000.0) / denom;
  CHECK(0.5 * (iv.hi - iv.lo) == doctest::Approx(hw).epsilon(1e-9));
  CHECK(wilson_halfwidth(50, 100, 0.95) == doctest::Approx(hw).epsilon(1e-9));
}

TEST_CASE("wilson_interval edges") {
  const auto zero = wilson_interval(0, 100, 0.95);
  CHECK(zero.lo == 0.0);  // exactly, by the algebra
  CHECK(zero.hi > 0.0);
  const auto full = wilson_interval(100, 100, 0.95);
  CHECK(full.hi == doctest::Approx(1.0));
  CHECK(full.lo < 1.0);
  CHECK_THROWS_AS(wilson_interval(0, 0, 0.95), InvalidParameter);
  CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), InvalidParameter);
  CHECK_THROWS_AS(wilson_interval(1, 4, 1.0), InvalidParameter);
}

TEST_CASE("normal_quantile and normal_cdf agree and hit known points") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
  }
  CHECK(q_function(3.0) == doctest::Approx(0.0013498980316300946).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidParameter);
}

TEST_CASE("kl_divergence_numeric reproduces closed-form Gaussian KLs") {
  // Shifted pair: D(N(0,1) || N(1,1)) = 1/2 nat.
  const double shifted = kl_divergence_numeric(MixtureSpec::gaussian(0.0, 1.0),
                                               MixtureSpec::gaussian(1.0, 1.0));
  CHECK(std::abs(shifted - gaussian_kl_closed(0, 1, 1, 1)) < 1e-6);
  CHECK(std::abs(shifted - 0.5) < 1e-6);

  // Scale pair: D(N(0,1) || N(0,4)) = ln 2 + 1/8 - 1/2 = 0.3181471805599453.
  const double scaled = kl_divergence_numeric(MixtureSpec::gaussian(0.0, 1.0),
                                              MixtureSpec::gaussian(0.0, 4.0));
  CHECK(std::abs(scaled - gaussian_kl_closed(0, 1, 0, 4)) < 1e-6);
  CHECK(std::abs(scaled - 0.3181471805599453) < 1e-3);  // quoted-value check
}

TEST_CASE("kl_divergence_numeric behaves at the degenerate and random ends") {
  // Identical mixtures -> 0 within tolerance.
  const auto m = MixtureSpec::sparse_bam(0.01, 1.0, 1.0);
  CHECK(std::abs(kl_divergence_numeric(m, m)) <= 1e-9);

  // a = 0 collapses H1 onto H0.
  const auto flat = MixtureSpec::sparse_bam(0.3, 0.0, 1.0);
  const auto noise = MixtureSpec::gaussian(0.0, 1.0);
  CHECK(std::abs(kl_divergence_numeric(flat, noise)) <= 1e-9);
  CHECK(std::abs(kl_divergence_numeric(noise, flat)) <= 1e-9);

  // Gibbs: D >= -tol for random mixture pairs.
  auto s = make_rng(2024, "klprop");
  for (int rep = 0; rep < 25; ++rep) {
    auto rand_mix = [&]() {
      MixtureSpec spec;
      const int k = 1 + static_cast<int>(s.next_u64() % 3);
      double wsum = 0.0;
      std::vector<double> w(k);
      for (int i = 0; i < k; ++i) {
        w[i] = 0.1 + s.uniform01();
        wsum += w[i];
      }
      for (int i = 0; i < k; ++i)
        spec.components.push_back({w[i] / wsum, 4.0 * s.uniform01() - 2.0,
                                   0.25 + 2.0 * s.uniform01()});
      // renormalize exactly enough for validate()
      double total = 0.0;
      for (auto& c : spec.components) total += c.weight;
      spec.components.back().weight += 1.0 - total;
      return spec;
    };
    const auto p0 = rand_mix();
    const auto p1 = rand_mix();
    CHECK(kl_divergence_numeric(p0, p1, 1e-8) >= -1e-8);
  }
}

TEST_CASE("kl_divergence_numeric reports non-convergence with its best estimate") {
  const auto p0 = MixtureSpec::gaussian(0.0, 1.0);
  const auto p1 = MixtureSpec::gaussian(1.0, 1.0);
  try {
    kl_divergence_numeric(p0, p1, 1e-300);
    FAIL("expected NumericFailure");
  } catch (const NumericFailure& e) {
    CHECK(std::abs(e.best_estimate - 0.5) < 1e-3);
  }
}

TEST_CASE("MixtureSpec validation rejects bad shapes") {
  MixtureSpec bad;
  bad.components.push_back({0.7, 0.0, 1.0});
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);  // weights sum to 0.7
  MixtureSpec negvar;
  negvar.components.push_back({1.0, 0.0, -1.0});
  CHECK_THROWS_AS(negvar.validate(), InvalidParameter);
  CHECK_THROWS_AS(MixtureSpec::sparse_bam(1.5, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("bernoulli_kl closed form") {
  CHECK(bernoulli_kl(0.2, 0.2) == 0.0);
  const double d = bernoulli_kl(0.3, 0.2);
  const double want = 0.3 * std::log(0.3 / 0.2) + 0.7 * std::log(0.7 / 0.8);
  CHECK(d == doctest::Approx(want).epsilon(1e-12));
  CHECK(bernoulli_kl(0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::isinf(bernoulli_kl(0.5, 0.0)));
}

TEST_CASE("spearman_rho on hand-built rankings") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> up{10, 20, 30, 40, 50};
  std::vector<double> down{5, 4, 3, 2, 1};
  CHECK(spearman_rho(x, up) == doctest::Approx(1.0));
  CHECK(spearman_rho(x, down) == doctest::Approx(-1.0));
  std::vector<double> mixed{3, 1, 4, 1, 5};  // tie at value 1
  const double rho = spearman_rho(x, mixed);
  CHECK(rho > -1.0);
  CHECK(rho < 1.0);
  std::vector<double> flat{2, 2, 2, 2, 2};
  CHECK_THROWS_AS(spearman_rho(x, flat), InvalidParameter);
}
