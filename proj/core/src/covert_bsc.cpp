#include "covertlab/covert_bsc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covertlab/errors.hpp"
#include "covertlab/rng.hpp"

namespace covertlab {

namespace {

std::uint64_t row_hash(const std::vector<std::uint32_t>& row) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint32_t pos : row) {
    h ^= pos;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

LowWeightCodebook gen_codebook(std::uint64_t n, std::uint32_t k, double q_c,
                               std::uint64_t public_seed) {
  if (n == 0) throw InvalidParameter("gen_codebook: n must be >= 1");
  if (k > 16)
    throw InvalidParameter(
        "gen_codebook: k must be <= 16 (all 2^k rows are materialized)");
  if (!(q_c >= 0.0 && q_c <= 0.5))
    throw InvalidParameter("gen_codebook: q_c must be in [0, 1/2]");

  LowWeightCodebook cb;
  cb.n = n;
  cb.k = k;
  cb.q_c = q_c;
  cb.public_seed = public_seed;
  const std::uint64_t rows = cb.row_count();
  cb.rows.reserve(rows);
  const RandomStream root(public_seed, "bsc_codebook_row");
  for (std::uint64_t r = 0; r < rows; ++r) {
    auto rs = root.derive(r);
    cb.rows.push_back(sample_index_subset(rs, n, q_c));
  }

  // Duplicate scan: sort by hash, verify equality on hash matches.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hashed(rows);
  for (std::uint64_t r = 0; r < rows; ++r) hashed[r] = {row_hash(cb.rows[r]), r};
  std::sort(hashed.begin(), hashed.end());
  for (std::uint64_t i = 1; i < rows; ++i) {
    if (hashed[i].first == hashed[i - 1].first &&
        cb.rows[hashed[i].second] == cb.rows[hashed[i - 1].second]) {
      cb.has_duplicate_rows = true;
      break;
    }
  }
  cb.degenerate = (q_c == 0.0) || cb.has_duplicate_rows;
  return cb;
}

std::vector<std::uint8_t> bsc_encode(std::uint64_t message,
                                     const LowWeightCodebook& codebook) {
  if (message >= codebook.row_count())
    throw InvalidInput("bsc_encode: message index out of range");
  std::vector<std::uint8_t> x(codebook.n, 0);
  for (std::uint32_t pos : codebook.rows[message]) x[pos] = 1;
  return x;
}

std::uint64_t bsc_decode(const std::vector<std::uint8_t>& received,
                         const LowWeightCodebook& codebook, double p_b) {
  if (!(p_b >= 0.0 && p_b < 0.5))
    throw InvalidParameter("bsc_decode: p_b must be in [0, 1/2)");
  if (received.size() != codebook.n)
    throw InvalidInput("bsc_decode: received length must equal n");

  std::uint64_t weight_y = 0;
  for (std::uint8_t b : received) {
    if (b > 1) throw InvalidInput("bsc_decode: received entries must be bits");
    weight_y += b;
  }

  // d(y, row) = wt(y) + wt(row) - 2*overlap; only the overlap needs the row.
  std::uint64_t best = 0;
  std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
  for (std::uint64_t r = 0; r < codebook.row_count(); ++r) {
    const auto& row = codebook.rows[r];
    std::uint64_t overlap = 0;
    for (std::uint32_t pos : row) overlap += received[pos];
    const std::int64_t d = static_cast<std::int64_t>(weight_y + row.size()) -
                           2 * static_cast<std::int64_t>(overlap);
    if (d < best_d) {  // strict: ties stay with the lowest index
      best_d = d;
      best = r;
    }
  }
  return best;
}

std::uint64_t plan_k(std::uint64_t n, double q_c, double p_b,
                     double target_block_error) {
  if (!(q_c >= 0.0 && q_c <= 0.5))
    throw InvalidParameter("plan_k: q_c must be in [0, 1/2]");
  if (!(p_b >= 0.0 && p_b < 0.5))
    throw InvalidParameter("plan_k: p_b must be in [0, 1/2)");
  if (!(target_block_error > 0.0 && target_block_error < 1.0))
    throw InvalidParameter("plan_k: target must be in (0, 1)");
  const double delta = 2.0 * q_c * (1.0 - q_c);
  const double gamma = 2.0 * std::sqrt(p_b * (1.0 - p_b));
  const double exponent = -static_cast<double>(n) * std::log1p(-delta * (1.0 - gamma));
  const double k_real = (exponent + std::log(target_block_error)) / std::log(2.0);
  if (k_real < 0.0) return 0;
  return static_cast<std::uint64_t>(std::floor(k_real));
}

}  // namespace covertlab
