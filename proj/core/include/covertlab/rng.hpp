#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace covertlab {

/// Counter-based pseudo-random stream.
///
/// The stream identity is a 64-bit base derived by hashing (seed, substream
/// label); the i-th raw output is a strong 64-bit mix of base + i*gamma
/// (splitmix64). Consequences that the simulations lean on:
///   * same (seed, label) -> same sequence, on any machine, forever;
///   * substreams are derived from the identity, not the consumed state, so
///     handing each Monte Carlo trial its own child stream gives results that
///     do not depend on scheduling or worker count;
///   * state is two words, so streams are cheap to copy and pass around.
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t seed, std::string_view substream = {});

  /// Child stream keyed by a string label. Independent of draws consumed so far.
  [[nodiscard]] RandomStream derive(std::string_view label) const;
  /// Child stream keyed by an index (e.g. trial number).
  [[nodiscard]] RandomStream derive(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform01();  ///< uniform on [0, 1), 53 random bits
  double gaussian();   ///< standard normal (ziggurat)
  double gaussian(double mean, double variance);
  bool bernoulli(double p);

  std::uint64_t stream_id() const { return base_; }
  std::uint64_t position() const { return position_; }

 private:
  struct BaseTag {};
  RandomStream(BaseTag, std::uint64_t base) : base_(base) {}

  std::uint64_t base_ = 0;
  std::uint64_t position_ = 0;
};

/// Convenience constructor: stream for (master seed, substream label).
RandomStream make_rng(std::uint64_t seed, std::string_view substream = {});

/// `count` iid N(mean, variance) samples. variance == 0 degenerates to the
/// constant `mean` (and consumes no randomness); variance < 0 is rejected.
std::vector<double> sample_gaussian(RandomStream& stream, double mean,
                                    double variance, std::size_t count);

/// In-place variant used by the hot simulation loops.
void fill_gaussian(RandomStream& stream, std::span<double> out, double mean,
                   double variance);

/// `count` iid Bernoulli(p) bits, one byte per bit.
std::vector<std::uint8_t> sample_bernoulli(RandomStream& stream, double p,
                                           std::size_t count);

/// Sorted indices of the heads in n iid Bernoulli(q) flips. Implemented with
/// geometric gap skipping, which is distributionally identical to flipping
/// each index and costs O(qn) draws instead of O(n).
std::vector<std::uint32_t> sample_index_subset(RandomStream& stream,
                                               std::uint64_t n, double q);

}  // namespace covertlab
