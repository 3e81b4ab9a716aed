#pragma once

#include <cstdint>
#include <vector>

namespace covertlab {

/// Random low-weight codebook for covert signaling over a binary symmetric
/// channel: 2^k rows of n iid Bernoulli(q_c) bits with q_c ~ tau/sqrt(n),
/// stored sparsely as the positions of the ones. Rows derive from a public
/// seed only — in the keyless regime the codebook is known to everyone,
/// including the adversary.
struct LowWeightCodebook {
  std::uint64_t n = 0;
  std::uint32_t k = 0;
  double q_c = 0.0;
  std::uint64_t public_seed = 0;
  bool degenerate = false;          ///< q_c == 0 or duplicate rows present
  bool has_duplicate_rows = false;  ///< exact duplicates found at generation
  std::vector<std::vector<std::uint32_t>> rows;  ///< ones positions, ascending

  std::uint64_t row_count() const { return std::uint64_t{1} << k; }
};

/// Deterministic in (n, k, q_c, public_seed); scans for duplicate rows.
/// k <= 16 because all 2^k rows are materialized.
LowWeightCodebook gen_codebook(std::uint64_t n, std::uint32_t k, double q_c,
                               std::uint64_t public_seed);

/// Dense bit transcript for a message index: row[message] scattered into n
/// positions. The all-quiet hypothesis corresponds to the all-zero input.
std::vector<std::uint8_t> bsc_encode(std::uint64_t message,
                                     const LowWeightCodebook& codebook);

/// Minimum-Hamming-distance decoding, which is exactly maximum likelihood for
/// crossover < 1/2. Ties resolve to the lowest message index.
std::uint64_t bsc_decode(const std::vector<std::uint8_t>& received,
                         const LowWeightCodebook& codebook, double p_b);

/// Largest k whose union-Bhattacharyya block-error bound stays <= target:
///   2^k * (1 - delta*(1 - gamma))^n <= target,
/// with delta = 2 q_c (1 - q_c) the chance two random rows differ in a given
/// position and gamma = 2 sqrt(p_b (1 - p_b)) the per-position Bhattacharyya
/// coefficient. Grows like sqrt(n) when q_c ~ 1/sqrt(n). Returns the uncapped
/// plan; callers clamp to their row budget.
std::uint64_t plan_k(std::uint64_t n, double q_c, double p_b,
                     double target_block_error = 0.1);

}  // namespace covertlab
