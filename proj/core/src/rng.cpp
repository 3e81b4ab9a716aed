#include "covertlab/rng.hpp"

#include <cmath>
#include <limits>

#include "covertlab/errors.hpp"

namespace covertlab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Stafford mix13 finalizer (the splitmix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Double round for identity derivation, where structured inputs (small
// integers, similar labels) must land far apart.
inline std::uint64_t mix64_strong(std::uint64_t z) { return mix64(mix64(z) + kGolden); }

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Ziggurat tables for the standard normal (256 layers, Doornik's layout).
// Built once at startup from the classic (R, V) constants; draws then cost
// one u64 in ~99% of calls.
// ---------------------------------------------------------------------------
struct ZigguratTables {
  static constexpr int kLayers = 256;
  static constexpr double kR = 3.6541528853610088;
  static constexpr double kV = 4.92867323399e-3;  // area of each layer

  double x[kLayers + 1];
  double ratio[kLayers];

  ZigguratTables() {
    double f = std::exp(-0.5 * kR * kR);
    x[0] = kV / f;  // base strip extends past R to cover the tail area
    x[1] = kR;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const ZigguratTables& zig() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view substream) {
  base_ = mix64_strong(seed ^ 0x5bf03635d780c43bull);
  if (!substream.empty()) base_ = mix64_strong(base_ ^ fnv1a(substream));
}

RandomStream RandomStream::derive(std::string_view label) const {
  return RandomStream(BaseTag{}, mix64_strong(base_ ^ fnv1a(label)));
}

RandomStream RandomStream::derive(std::uint64_t index) const {
  return RandomStream(BaseTag{}, mix64_strong(base_ ^ (index * kGolden) ^ 0x94d049bb133111ebull));
}

std::uint64_t RandomStream::next_u64() {
  ++position_;
  return mix64(base_ + position_ * kGolden);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  const ZigguratTables& t = zig();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int layer = static_cast<int>(bits & 0xff);
    // Signed uniform on [-1, 1) from the top 53 bits; layer index comes from
    // disjoint low bits of the same word.
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
    if (std::abs(u) < t.ratio[layer]) return u * t.x[layer];
    if (layer == 0) {
      // Marsaglia tail sample beyond R.
      double xt, yt;
      do {
        xt = -std::log(1.0 - uniform01()) / ZigguratTables::kR;
        yt = -std::log(1.0 - uniform01());
      } while (yt + yt < xt * xt);
      return u < 0 ? -(ZigguratTables::kR + xt) : ZigguratTables::kR + xt;
    }
    const double xv = u * t.x[layer];
    const double f0 = std::exp(-0.5 * (t.x[layer] * t.x[layer] - xv * xv));
    const double f1 = std::exp(-0.5 * (t.x[layer + 1] * t.x[layer + 1] - xv * xv));
    if (f0 + uniform01() * (f1 - f0) < 1.0) return xv;
  }
}

double RandomStream::gaussian(double mean, double variance) {
  if (!(variance >= 0.0)) throw InvalidParameter("gaussian: variance must be >= 0");
  if (variance == 0.0) return mean;
  return mean + std::sqrt(variance) * gaussian();
}

bool RandomStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("bernoulli: p must be in [0, 1]");
  return uniform01() < p;
}

RandomStream make_rng(std::uint64_t seed, std::string_view substream) {
  return RandomStream(seed, substream);
}

std::vector<double> sample_gaussian(RandomStream& stream, double mean,
                                    double variance, std::size_t count) {
  std::vector<double> out(count);
  fill_gaussian(stream, out, mean, variance);
  return out;
}

void fill_gaussian(RandomStream& stream, std::span<double> out, double mean,
                   double variance) {
  if (!(variance >= 0.0)) throw InvalidParameter("sample_gaussian: variance must be >= 0");
  if (variance == 0.0) {
    for (double& y : out) y = mean;
    return;
  }
  const double sd = std::sqrt(variance);
  if (mean == 0.0 && sd == 1.0) {
    for (double& y : out) y = stream.gaussian();
  } else {
    for (double& y : out) y = mean + sd * stream.gaussian();
  }
}

std::vector<std::uint8_t> sample_bernoulli(RandomStream& stream, double p,
                                           std::size_t count) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("sample_bernoulli: p must be in [0, 1]");
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = stream.uniform01() < p ? 1 : 0;
  return out;
}

std::vector<std::uint32_t> sample_index_subset(RandomStream& stream,
                                               std::uint64_t n, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("sample_index_subset: q must be in [0, 1]");
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw InvalidParameter("sample_index_subset: n exceeds 32-bit index range");
  std::vector<std::uint32_t> out;
  if (q == 0.0 || n == 0) return out;
  if (q == 1.0) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(i);
    return out;
  }
  out.reserve(static_cast<std::size_t>(q * static_cast<double>(n) * 1.25) + 16);
  const double denom = std::log1p(-q);  // log(1-q) < 0
  std::uint64_t pos = 0;
  for (;;) {
    // Failures before the next head: floor(log(U)/log(1-q)), U in (0, 1].
    const double u = 1.0 - stream.uniform01();
    const double gap = std::floor(std::log(u) / denom);
    if (gap >= static_cast<double>(n)) break;  // ran off the end
    pos += static_cast<std::uint64_t>(gap);
    if (pos >= n) break;
    out.push_back(static_cast<std::uint32_t>(pos));
    ++pos;
    if (pos >= n) break;
  }
  return out;
}

}  // namespace covertlab
