#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "covertlab/rng.hpp"

namespace covertlab {

/// Memoryless additive white Gaussian noise channel.
struct AwgnParams {
  double sigma2;  ///< noise power, > 0
  explicit AwgnParams(double sigma2_arg);
};

/// Binary symmetric channel. Covert-coding entry points additionally insist
/// on 0 < p < 1/2; plain application admits the full [0, 1] range (p = 1 is
/// the deterministic complement).
struct BscParams {
  double p;
  explicit BscParams(double p_arg);
};

/// Discrete memoryless channel given by a row-stochastic transition matrix.
/// One input index is designated as the "no transmission" symbol.
struct Dmc {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::size_t no_tx_index = 0;
  std::vector<double> probs;  ///< row-major, inputs x outputs

  /// Rows sum to 1 within 1e-12, entries >= 0, no_tx_index < inputs.
  void validate() const;
  double at(std::size_t in, std::size_t out) const { return probs[in * outputs + out]; }
};

/// y_i = x_i + N(0, sigma2), iid across i.
std::vector<double> awgn_apply(std::span<const double> x, const AwgnParams& ch,
                               RandomStream& stream);

/// Each bit flipped independently with probability p.
std::vector<std::uint8_t> bsc_apply(std::span<const std::uint8_t> bits,
                                    const BscParams& ch, RandomStream& stream);

/// Each symbol mapped through its transition row, independently.
std::vector<std::uint32_t> dmc_apply(std::span<const std::uint32_t> symbols,
                                     const Dmc& ch, RandomStream& stream);

/// Plain-text DMC description:
///   <inputs> <outputs> <no_tx_index>
/// followed by `inputs` rows of `outputs` probabilities.
Dmc dmc_parse(std::istream& in);
Dmc dmc_load_file(const std::string& path);

}  // namespace covertlab
