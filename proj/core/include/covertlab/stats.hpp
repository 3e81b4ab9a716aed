#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace covertlab {

struct MixtureComponent {
  double weight;
  double mean;
  double variance;
};

/// Finite Gaussian mixture, the density language the detectors reason in.
struct MixtureSpec {
  std::vector<MixtureComponent> components;

  static MixtureSpec gaussian(double mean, double variance);
  /// Per-sample marginal of sparse antipodal signalling against noise of power
  /// sigma2: (1-q) N(0, sigma2) + q/2 N(+a, sigma2) + q/2 N(-a, sigma2).
  static MixtureSpec sparse_bam(double q, double a, double sigma2);

  /// Weights nonnegative and summing to 1 within 1e-12; variances > 0.
  void validate() const;
  double pdf(double y) const;

  double min_mean() const;
  double max_mean() const;
  double max_std() const;
};

/// KL divergence D(p0 || p1) in nats by adaptive Simpson quadrature over
/// [min mean - 12 max std, max mean + 12 max std]. Integrand is clamped to 0
/// where p0 < 1e-300. Throws NumericFailure (carrying the best estimate) if
/// the subdivision cap of 1e6 intervals is exhausted before reaching `tol`.
double kl_divergence_numeric(const MixtureSpec& p0, const MixtureSpec& p1,
                             double tol = 1e-9);

/// P[Binomial(n, p) <= k], evaluated through log-space anchored tail sums.
/// Relative error <= 1e-9 for n up to 1e7; exact 1.0 for k >= n.
double binomial_cdf(std::uint64_t n, double p, std::uint64_t k);

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence);
double wilson_halfwidth(std::uint64_t successes, std::uint64_t trials,
                        double confidence);

/// Phi^{-1}(p): standard normal quantile (Wichura's AS241, ~1e-15 accurate).
double normal_quantile(double p);
double normal_cdf(double x);
/// Gaussian tail Q(x) = 1 - Phi(x).
double q_function(double x);

/// D(Bern(p) || Bern(r)) in nats.
double bernoulli_kl(double p, double r);

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace covertlab
