#include "covertlab/warden.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

#include "covertlab/errors.hpp"
#include "covertlab/parallel.hpp"
#include "covertlab/stats.hpp"

namespace covertlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp3(double t0, double t1, double t2) {
  const double m = std::max(t0, std::max(t1, t2));
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(t0 - m) + std::exp(t1 - m) + std::exp(t2 - m));
}

// Shared per-sample term for the sparse-scheme mixture against pure noise.
struct LrtTermEval {
  double log_1mq, log_q_half, b, slope;

  LrtTermEval(double q, double a, double sigma_w2)
      : log_1mq(q < 1.0 ? std::log1p(-q) : kNegInf),
        log_q_half(q > 0.0 ? std::log(0.5 * q) : kNegInf),
        b(-a * a / (2.0 * sigma_w2)),
        slope(a / sigma_w2) {}

  double operator()(double y) const {
    const double c = slope * std::abs(y);
    return logsumexp3(log_1mq, log_q_half + b + c, log_q_half + b - c);
  }
};

void check_lrt_params(double q, double a, double sigma_w2) {
  if (!(q >= 0.0 && q <= 1.0))
    throw InvalidParameter("lrt: q must be in [0, 1]");
  if (!(a > 0.0)) throw InvalidParameter("lrt: a must be > 0");
  if (!(sigma_w2 > 0.0)) throw InvalidParameter("lrt: sigma_w2 must be > 0");
}

}  // namespace

double radiometer_stat(std::span<const double> y) {
  if (y.empty()) throw InvalidInput("radiometer_stat: empty transcript");
  double sum = 0.0;
  for (double v : y) sum += v * v;
  return sum / static_cast<double>(y.size());
}

AwgnLrt::AwgnLrt(double q, double a, double sigma_w2)
    : q_(q), a_(a), sigma_w2_(sigma_w2) {
  check_lrt_params(q, a, sigma_w2);
  if (q_ == 0.0) return;  // term is identically 0; no table needed

  // The term depends on y only through c = (a/s2)*|y|, so cubic interpolation
  // error scales as (step * a/s2)^4; 0.006 in c-units keeps it under 1e-10.
  const double sigma = std::sqrt(sigma_w2);
  y_max_ = a + 12.0 * sigma;
  const double slope = a / sigma_w2;
  step_ = 0.006 / slope;
  std::size_t count = static_cast<std::size_t>(y_max_ / step_) + 4;
  if (count > (1u << 22)) {  // keep degenerate parameter choices bounded
    count = 1u << 22;
    step_ = y_max_ / static_cast<double>(count - 4);
  }
  inv_step_ = 1.0 / step_;
  const LrtTermEval eval(q_, a_, sigma_w2_);
  nodes_.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    nodes_[i] = eval(static_cast<double>(i) * step_);
}

double AwgnLrt::exact_term(double y) const {
  return LrtTermEval(q_, a_, sigma_w2_)(y);
}

double AwgnLrt::term(double y) const {
  if (q_ == 0.0) return 0.0;
  const double u = std::abs(y);
  if (u >= y_max_) return exact_term(y);
  const double x = u * inv_step_;
  std::size_t i = static_cast<std::size_t>(x);
  if (i < 1) i = 1;
  if (i > nodes_.size() - 3) i = nodes_.size() - 3;
  const double t = x - static_cast<double>(i);
  // 4-point cubic through nodes i-1..i+2
  const double w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return w_m1 * nodes_[i - 1] + w_0 * nodes_[i] + w_1 * nodes_[i + 1] +
         w_2 * nodes_[i + 2];
}

double AwgnLrt::stat(std::span<const double> y) const {
  double sum = 0.0;
  for (double v : y) sum += term(v);
  return sum;
}

double lrt_stat_awgn(std::span<const double> y, double q, double a,
                     double sigma_w2) {
  check_lrt_params(q, a, sigma_w2);
  if (q == 0.0) return 0.0;
  const LrtTermEval eval(q, a, sigma_w2);
  double sum = 0.0;
  for (double v : y) sum += eval(v);
  return sum;
}

std::uint64_t count_stat(std::span<const std::uint8_t> bits) {
  std::uint64_t ones = 0;
  for (std::uint8_t b : bits) ones += b != 0;
  return ones;
}

double bsc_mixture_lrt_stat(std::span<const std::uint8_t> y,
                            const LowWeightCodebook& codebook, double p_w) {
  if (codebook.k > 10)
    throw InvalidParameter(
        "bsc_mixture_lrt_stat: k must be <= 10 (2^k mixture terms)");
  if (!(p_w > 0.0 && p_w < 1.0))
    throw InvalidParameter("bsc_mixture_lrt_stat: p_w must be in (0, 1)");
  if (y.size() != codebook.n)
    throw InvalidInput("bsc_mixture_lrt_stat: transcript length must equal n");

  // log P1(y)/P0(y) with P1 the uniform row mixture through BSC(p_w) and P0
  // the all-zero word through it. Row r contributes lambda*(d_r - wt(y)) where
  // d_r = wt(y xor row) = wt(y) + wt(row) - 2*overlap.
  const double lambda = std::log(p_w / (1.0 - p_w));
  const double log_prior = -static_cast<double>(codebook.k) * std::log(2.0);
  std::vector<double> terms;
  terms.reserve(codebook.rows.size());
  double max_term = kNegInf;
  for (const auto& row : codebook.rows) {
    std::uint64_t overlap = 0;
    for (std::uint32_t pos : row) {
      if (y[pos] > 1)
        throw InvalidInput("bsc_mixture_lrt_stat: entries must be bits");
      overlap += y[pos];
    }
    const double diff = static_cast<double>(row.size()) -
                        2.0 * static_cast<double>(overlap);
    const double t = log_prior + lambda * diff;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

DetectorReport min_error_from_samples(std::vector<double> h0_stats,
                                      std::vector<double> h1_stats,
                                      std::string detector_name) {
  if (h0_stats.empty() || h1_stats.empty())
    throw InvalidInput("min_error_from_samples: need samples for both hypotheses");
  std::sort(h0_stats.begin(), h0_stats.end());
  std::sort(h1_stats.begin(), h1_stats.end());
  const std::uint64_t n0 = h0_stats.size();
  const std::uint64_t n1 = h1_stats.size();

  // Decision "H1 when stat > t": pfa = (n0 - c0)/n0, pmd = c1/n1 with
  // c0/c1 = how many samples sit at or below t. Sweep t over the pooled
  // order statistics (plus t = -inf where the sum is exactly 1); the flipped
  // orientation at the same t has error sum 2 - (this sum).
  struct Point {
    double sum;
    std::uint64_t c0, c1;
    double threshold;
  };
  Point best_low{1.0, 0, 0, kNegInf};   // minimizes orientation A
  Point best_high{1.0, 0, 0, kNegInf};  // maximizes A = minimizes flipped B
  std::size_t i0 = 0, i1 = 0;
  while (i0 < n0 || i1 < n1) {
    double t;
    if (i1 >= n1 || (i0 < n0 && h0_stats[i0] <= h1_stats[i1]))
      t = h0_stats[i0];
    else
      t = h1_stats[i1];
    while (i0 < n0 && h0_stats[i0] <= t) ++i0;
    while (i1 < n1 && h1_stats[i1] <= t) ++i1;
    const double sum = 1.0 - static_cast<double>(i0) / static_cast<double>(n0) +
                       static_cast<double>(i1) / static_cast<double>(n1);
    if (sum < best_low.sum) best_low = {sum, i0, i1, t};
    if (sum > best_high.sum) best_high = {sum, i0, i1, t};
  }

  DetectorReport report;
  report.detector_name = std::move(detector_name);
  report.trials = n0;
  std::uint64_t fa_count, md_count;
  if (2.0 - best_high.sum < best_low.sum) {
    report.decide_greater = false;
    report.threshold = best_high.threshold;
    fa_count = best_high.c0;       // h0 samples at or below t get called H1
    md_count = n1 - best_high.c1;  // h1 samples above t get called H0
  } else {
    report.decide_greater = true;
    report.threshold = best_low.threshold;
    fa_count = n0 - best_low.c0;
    md_count = best_low.c1;
  }
  report.pfa = static_cast<double>(fa_count) / static_cast<double>(n0);
  report.pmd = static_cast<double>(md_count) / static_cast<double>(n1);
  report.sum_error = report.pfa + report.pmd;
  const double hw_fa = wilson_halfwidth(fa_count, n0, 0.95);
  const double hw_md = wilson_halfwidth(md_count, n1, 0.95);
  report.ci_halfwidth = std::sqrt(hw_fa * hw_fa + hw_md * hw_md);
  return report;
}

DetectorReport min_error_estimate(
    const std::function<double(RandomStream&)>& h0_stat,
    const std::function<double(RandomStream&)>& h1_stat, std::uint64_t trials,
    const RandomStream& stream, std::string detector_name, unsigned jobs) {
  if (trials < 100)
    throw InvalidParameter("min_error_estimate: trials must be >= 100");
  std::vector<double> h0(trials), h1(trials);
  const auto h0_root = stream.derive("h0");
  const auto h1_root = stream.derive("h1");
  parallel_for(jobs, trials, [&](std::size_t i) {
    auto rs = h0_root.derive(static_cast<std::uint64_t>(i));
    h0[i] = h0_stat(rs);
  });
  parallel_for(jobs, trials, [&](std::size_t i) {
    auto rs = h1_root.derive(static_cast<std::uint64_t>(i));
    h1[i] = h1_stat(rs);
  });
  return min_error_from_samples(std::move(h0), std::move(h1),
                                std::move(detector_name));
}

double pinsker_floor(std::uint64_t n, double per_sample_kl) {
  if (!(per_sample_kl >= 0.0))
    throw InvalidParameter("pinsker_floor: per_sample_kl must be >= 0");
  const double tv =
      std::sqrt(static_cast<double>(n) * per_sample_kl / 2.0);
  return tv >= 1.0 ? 0.0 : 1.0 - tv;
}

std::vector<RocPoint> roc_points(std::vector<double> h0_stats,
                                 std::vector<double> h1_stats,
                                 std::size_t max_points) {
  if (h0_stats.empty() || h1_stats.empty())
    throw InvalidInput("roc_points: need samples for both hypotheses");
  if (max_points < 2) throw InvalidParameter("roc_points: max_points >= 2");
  std::sort(h0_stats.begin(), h0_stats.end());
  std::sort(h1_stats.begin(), h1_stats.end());
  const std::uint64_t n0 = h0_stats.size();
  const std::uint64_t n1 = h1_stats.size();
  std::vector<RocPoint> all;
  all.push_back({kNegInf, 1.0, 0.0});
  std::size_t i0 = 0, i1 = 0;
  while (i0 < n0 || i1 < n1) {
    double t;
    if (i1 >= n1 || (i0 < n0 && h0_stats[i0] <= h1_stats[i1]))
      t = h0_stats[i0];
    else
      t = h1_stats[i1];
    while (i0 < n0 && h0_stats[i0] <= t) ++i0;
    while (i1 < n1 && h1_stats[i1] <= t) ++i1;
    all.push_back({t, 1.0 - static_cast<double>(i0) / static_cast<double>(n0),
                   static_cast<double>(i1) / static_cast<double>(n1)});
  }
  if (all.size() <= max_points) return all;
  std::vector<RocPoint> thin;
  const std::size_t stride = (all.size() + max_points - 1) / max_points;
  for (std::size_t i = 0; i < all.size(); i += stride) thin.push_back(all[i]);
  if (thin.back().threshold != all.back().threshold) thin.push_back(all.back());
  return thin;
}

void write_roc_csv(const std::vector<RocPoint>& points,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_roc_csv: cannot open " + path);
  out << "threshold,pfa,pmd\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", p.threshold, p.pfa,
                  p.pmd);
    out << buf;
  }
  if (!out) throw IoError("write_roc_csv: write failed for " + path);
}

}  // namespace covertlab
