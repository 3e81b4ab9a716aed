#include "covertlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "covertlab/errors.hpp"

namespace covertlab {
namespace {

constexpr double kTiny = 1e-300;  // density clamp for the KL integrand
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// log C(n,j) + j log p + (n-j) log(1-p), to ~1e-10 absolute for n <= 1e7.
// Differences of large lgammas lose too much (abs error ~1e-8 at n = 1e7), so
// the binomial coefficient is either built term by term (small branch) or via
// a Stirling expansion whose entropy terms are centered with log1p to dodge
// the cancellation.
double log_binom_pmf(double nd, double p, double jd) {
  const double md = nd - jd;
  const double logp = std::log(p);
  const double log1mp = std::log1p(-p);
  if (std::min(jd, md) <= 64.0) {
    double lc = 0.0;
    const double mm = std::min(jd, md);
    for (double i = 0.0; i < mm; i += 1.0) lc += std::log((nd - i) / (i + 1.0));
    return lc + jd * logp + md * log1mp;
  }
  const double np_ = nd * p;
  const double nq_ = nd - np_;
  const double d1 = (jd - np_) / np_;
  const double d2 = (md - nq_) / nq_;
  double l = -jd * std::log1p(d1) - md * std::log1p(d2);
  l += 0.5 * std::log(nd / (2.0 * M_PI * jd * md));
  auto corr = [](double x) { return 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x); };
  l += corr(nd) - corr(jd) - corr(md);
  return l;
}

}  // namespace

MixtureSpec MixtureSpec::gaussian(double mean, double variance) {
  MixtureSpec spec;
  spec.components.push_back({1.0, mean, variance});
  spec.validate();
  return spec;
}

MixtureSpec MixtureSpec::sparse_bam(double q, double a, double sigma2) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("sparse_bam: q must be in [0, 1]");
  if (!(a >= 0.0)) throw InvalidParameter("sparse_bam: amplitude must be >= 0");
  MixtureSpec spec;
  spec.components.push_back({1.0 - q, 0.0, sigma2});
  spec.components.push_back({0.5 * q, a, sigma2});
  spec.components.push_back({0.5 * q, -a, sigma2});
  spec.validate();
  return spec;
}

void MixtureSpec::validate() const {
  if (components.empty()) throw InvalidParameter("MixtureSpec: no components");
  double sum = 0.0;
  for (const auto& c : components) {
    if (!std::isfinite(c.weight) || c.weight < 0.0)
      throw InvalidParameter("MixtureSpec: weights must be finite and >= 0");
    if (!std::isfinite(c.mean)) throw InvalidParameter("MixtureSpec: mean must be finite");
    if (!(c.variance > 0.0) || !std::isfinite(c.variance))
      throw InvalidParameter("MixtureSpec: variances must be positive");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidParameter("MixtureSpec: weights must sum to 1 within 1e-12");
}

double MixtureSpec::pdf(double y) const {
  double acc = 0.0;
  for (const auto& c : components) {
    if (c.weight == 0.0) continue;
    const double d = y - c.mean;
    acc += c.weight * kInvSqrt2Pi / std::sqrt(c.variance) *
           std::exp(-0.5 * d * d / c.variance);
  }
  return acc;
}

double MixtureSpec::min_mean() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : components) m = std::min(m, c.mean);
  return m;
}

double MixtureSpec::max_mean() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : components) m = std::max(m, c.mean);
  return m;
}

double MixtureSpec::max_std() const {
  double v = 0.0;
  for (const auto& c : components) v = std::max(v, c.variance);
  return std::sqrt(v);
}

double kl_divergence_numeric(const MixtureSpec& p0, const MixtureSpec& p1,
                             double tol) {
  p0.validate();
  p1.validate();
  if (!(tol > 0.0)) throw InvalidParameter("kl_divergence_numeric: tol must be > 0");

  const double lo = std::min(p0.min_mean(), p1.min_mean()) -
                    12.0 * std::max(p0.max_std(), p1.max_std());
  const double hi = std::max(p0.max_mean(), p1.max_mean()) +
                    12.0 * std::max(p0.max_std(), p1.max_std());

  auto f = [&](double y) {
    const double f0 = p0.pdf(y);
    if (f0 < kTiny) return 0.0;
    const double f1 = std::max(p1.pdf(y), kTiny);
    return f0 * (std::log(f0) - std::log(f1));
  };

  struct Seg {
    double a, b, fa, fm, fb, s, tol;
    int depth;
  };

  constexpr int kInitial = 32;
  constexpr int kMaxDepth = 48;
  constexpr std::size_t kCap = 1000000;  // subdivision budget

  std::vector<Seg> stack;
  stack.reserve(256);
  const double h = (hi - lo) / kInitial;
  for (int i = kInitial - 1; i >= 0; --i) {
    const double a = lo + i * h;
    const double b = (i == kInitial - 1) ? hi : a + h;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol / kInitial, 0});
  }

  double total = 0.0;
  std::size_t splits = 0;
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    const double m = 0.5 * (s.a + s.b);
    const double lm = 0.5 * (s.a + m);
    const double rm = 0.5 * (m + s.b);
    const double flm = f(lm), frm = f(rm);
    const double sl = simpson(s.a, m, s.fa, flm, s.fm);
    const double sr = simpson(m, s.b, s.fm, frm, s.fb);
    const double s2 = sl + sr;
    if (s.depth >= kMaxDepth || std::abs(s2 - s.s) <= 15.0 * s.tol) {
      total += s2 + (s2 - s.s) / 15.0;  // Richardson tail correction
      continue;
    }
    if (++splits > kCap) {
      double best = total + s2;
      for (const auto& rest : stack) best += rest.s;
      throw NumericFailure("kl_divergence_numeric: subdivision cap exceeded", best);
    }
    stack.push_back({m, s.b, s.fm, frm, s.fb, sr, 0.5 * s.tol, s.depth + 1});
    stack.push_back({s.a, m, s.fa, flm, s.fm, sl, 0.5 * s.tol, s.depth + 1});
  }
  return total;
}

double binomial_cdf(std::uint64_t n, double p, std::uint64_t k) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("binomial_cdf: p must be in [0, 1]");
  if (k >= n) return 1.0;  // includes n == 0
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;

  const double nd = static_cast<double>(n);
  const double mean = nd * p;
  auto log_pmf = [&](std::uint64_t j) {
    return log_binom_pmf(nd, p, static_cast<double>(j));
  };

  if (static_cast<double>(k) <= mean) {
    // Sum terms j = k, k-1, ..., anchored at j = k (the largest of them).
    double sum = 1.0, t = 1.0;
    for (std::uint64_t j = k; j >= 1; --j) {
      t *= static_cast<double>(j) * (1.0 - p) / ((nd - static_cast<double>(j) + 1.0) * p);
      sum += t;
      if (t <= sum * 1e-18) break;
    }
    return std::exp(log_pmf(k) + std::log(sum));
  }
  // Complement: sum the upper tail from j = k+1 upward.
  double sum = 1.0, t = 1.0;
  for (std::uint64_t j = k + 1; j < n; ++j) {
    t *= (nd - static_cast<double>(j)) * p / ((static_cast<double>(j) + 1.0) * (1.0 - p));
    sum += t;
    if (t <= sum * 1e-18) break;
  }
  return 1.0 - std::exp(log_pmf(k + 1) + std::log(sum));
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
  if (trials == 0) throw InvalidParameter("wilson_interval: trials must be >= 1");
  if (successes > trials) throw InvalidParameter("wilson_interval: successes > trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InvalidParameter("wilson_interval: confidence must be in (0, 1)");
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double hw =
      z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - hw), std::min(1.0, center + hw)};
}

double wilson_halfwidth(std::uint64_t successes, std::uint64_t trials,
                        double confidence) {
  const Interval iv = wilson_interval(successes, trials, confidence);
  return 0.5 * (iv.hi - iv.lo);
}

// Wichura's algorithm AS241 (PPND16).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("normal_quantile: p must be in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double q_function(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

double bernoulli_kl(double p, double r) {
  if (!(p >= 0.0 && p <= 1.0) || !(r >= 0.0 && r <= 1.0))
    throw InvalidParameter("bernoulli_kl: probabilities must be in [0, 1]");
  if (p == r) return 0.0;
  if (r <= 0.0 || r >= 1.0) return std::numeric_limits<double>::infinity();
  const double t0 = (p == 0.0) ? 0.0 : p * std::log(p / r);
  const double t1 = (p == 1.0) ? 0.0 : (1.0 - p) * std::log((1.0 - p) / (1.0 - r));
  return t0 + t1;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidParameter("spearman_rho: length mismatch");
  if (x.size() < 2) throw InvalidParameter("spearman_rho: need at least 2 points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw InvalidParameter("spearman_rho: degenerate (constant) input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace covertlab
