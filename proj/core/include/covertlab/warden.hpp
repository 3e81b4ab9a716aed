#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "covertlab/covert_bsc.hpp"
#include "covertlab/rng.hpp"

namespace covertlab {

/// Outcome of a binary hypothesis test tuned to minimize pfa + pmd.
/// Decision rule: "call H1 when stat > threshold" if decide_greater, else
/// "call H1 when stat <= threshold" (both orientations are tried).
struct DetectorReport {
  double pfa = 0.0;           ///< P(call H1 | H0)
  double pmd = 0.0;           ///< P(call H0 | H1)
  double sum_error = 0.0;     ///< pfa + pmd at the minimizing threshold
  double threshold = 0.0;
  double ci_halfwidth = 0.0;  ///< sqrt of summed squared Wilson 95% halfwidths
  std::uint64_t trials = 0;   ///< per hypothesis
  std::string detector_name;
  bool decide_greater = true;
};

/// Average received power (1/n) sum y_i^2.
double radiometer_stat(std::span<const double> y);

/// Per-sample log likelihood ratio for the sparse antipodal scheme marginal
///   H1: (1-q) N(0, s2) + (q/2) N(+a, s2) + (q/2) N(-a, s2)   vs   H0: N(0, s2).
/// The per-sample term is log((1-q) + q e^{-a^2/2s2} cosh(a y / s2)), summed
/// over the transcript. Construction precomputes an interpolation table so
/// bulk evaluation costs a few ns per sample; table and exact paths agree to
/// 1e-10 and inputs beyond the table range fall back to the exact formula.
class AwgnLrt {
 public:
  AwgnLrt(double q, double a, double sigma_w2);

  double exact_term(double y) const;  ///< direct log-space evaluation
  double term(double y) const;        ///< table-accelerated evaluation
  double stat(std::span<const double> y) const;  ///< sum of term() over y

  double q() const { return q_; }
  double a() const { return a_; }
  double sigma_w2() const { return sigma_w2_; }

 private:
  double q_, a_, sigma_w2_;
  double step_ = 0.0, inv_step_ = 0.0, y_max_ = 0.0;
  std::vector<double> nodes_;  // exact_term at i*step_, i = 0..N (even in y)
};

/// One-shot convenience wrapper (exact path; no table build).
double lrt_stat_awgn(std::span<const double> y, double q, double a,
                     double sigma_w2);

/// Number of ones. The weight is the sufficient statistic for telling
/// all-quiet from codeword-plus-flips when only densities matter.
std::uint64_t count_stat(std::span<const std::uint8_t> bits);

/// Exact log likelihood ratio for the keyless BSC adversary who knows the
/// public codebook: H1 is the uniform mixture over all 2^k rows pushed
/// through BSC(p_w), H0 is the all-zero word through the same channel.
/// Materializes 2^k mixture terms, so k <= 10.
double bsc_mixture_lrt_stat(std::span<const std::uint8_t> y,
                            const LowWeightCodebook& codebook, double p_w);

/// Threshold sweep over the pooled empirical statistics, both decision
/// orientations, equal priors. Inputs are one statistic per trial under each
/// hypothesis; sizes may differ.
DetectorReport min_error_from_samples(std::vector<double> h0_stats,
                                      std::vector<double> h1_stats,
                                      std::string detector_name);

/// Monte Carlo front end: draws `trials` statistics per hypothesis, each from
/// its own child stream (results do not depend on jobs). trials >= 100.
DetectorReport min_error_estimate(
    const std::function<double(RandomStream&)>& h0_stat,
    const std::function<double(RandomStream&)>& h1_stat, std::uint64_t trials,
    const RandomStream& stream, std::string detector_name = "stat",
    unsigned jobs = 1);

/// Analytic floor on pfa + pmd from the iid KL chain rule and Pinsker's
/// inequality: max(0, 1 - sqrt(n * per_sample_kl / 2)).
double pinsker_floor(std::uint64_t n, double per_sample_kl);

/// Diagnostic operating points for the rule "call H1 when stat > threshold",
/// thinned to at most max_points rows.
struct RocPoint {
  double threshold = 0.0;
  double pfa = 0.0;
  double pmd = 0.0;
};
std::vector<RocPoint> roc_points(std::vector<double> h0_stats,
                                 std::vector<double> h1_stats,
                                 std::size_t max_points = 200);
void write_roc_csv(const std::vector<RocPoint>& points, const std::string& path);

}  // namespace covertlab
