#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "covertlab/rng.hpp"

namespace covertlab {

/// Secret shared between sender and receiver: which channel uses carry payload
/// and the one-time pad that whitens the coded bits on air.
struct SecretKey {
  std::uint64_t n = 0;                ///< blocklength the key was cut for
  std::vector<std::uint32_t> slots;   ///< strictly increasing, all < n
  std::vector<std::uint8_t> pad;      ///< one bit (0/1) per slot

  void validate() const;  ///< throws InvalidInput on broken invariants
};

/// Every message bit occupies m consecutive slots; the decoder soft-combines
/// the m observations before deciding the bit.
struct Repetition {
  std::uint32_t m = 1;
};

/// 2^k random codewords over the slot sequence, regenerated on demand from a
/// public seed (the codebook is not secret; only slots and pad are).
struct MlCodebook {
  std::uint32_t k = 0;
  std::uint64_t public_seed = 0;
};

using EccMode = std::variant<Repetition, MlCodebook>;

struct SchemeParams {
  std::uint64_t n = 0;
  double q = 0.0;  ///< per-use slot selection probability, in [0, 1]
  double a = 0.0;  ///< slot amplitude (square root of per-slot power)
  EccMode ecc = Repetition{1};
  double tau = 1.0;  ///< density constant when built via sqrt_law()

  /// q = tau / sqrt(n): about tau*sqrt(n) slots, total power tau*a^2*sqrt(n).
  static SchemeParams sqrt_law(std::uint64_t n, double tau, double a,
                               EccMode ecc);
  void validate() const;
};

/// Auto-sizing for repetition coding: the largest k whose repetition factor
/// m(k) = max(5, ceil(2*(sigma_b2/a^2)*ln(10k))) still fits k*m slots. The
/// factor grows with log k so the union bound over k bits keeps block error
/// roughly <= 0.1. Returns k = 0 (with the k = 1 factor) when nothing fits.
struct RepetitionPlan {
  std::uint64_t k = 0;
  std::uint32_t m = 1;
};
RepetitionPlan plan_auto_repetition(std::uint64_t slot_count, double a,
                                    double sigma_b2);

/// Slot subset from n Bernoulli(q) flips plus fresh uniform pad bits.
SecretKey gen_key(const SchemeParams& params, RandomStream& stream);

/// Deterministic channel-code layer, before the pad is applied.
/// repetition: bit j occupies coded positions [j*m, (j+1)*m); positions past
/// the message are zero filler (the one-time pad makes them uniform on air).
/// ml_codebook: returns the codeword row indexed by the message
/// (message[0] is the least significant bit of the row index).
std::vector<std::uint8_t> ecc_encode(const std::vector<std::uint8_t>& message,
                                     const EccMode& mode,
                                     std::uint64_t target_len);

/// Message bits carried by this key: floor(|slots|/m) for repetition; k for
/// ml_codebook when at least k slots exist, else 0.
std::uint64_t plan_capacity(const SchemeParams& params, const SecretKey& key);

/// Length-n transcript: selected slots carry +a (coded xor pad = 0) or -a,
/// everything else exactly 0. Empty or undersized keys give all zeros.
std::vector<double> encode(const std::vector<std::uint8_t>& message,
                           const SecretKey& key, const SchemeParams& params);

/// Inverse of encode after the channel: pad-corrects the slot observations
/// and returns plan_capacity(params, key) bits.
std::vector<std::uint8_t> decode(const std::vector<double>& y,
                                 const SecretKey& key,
                                 const SchemeParams& params);

/// Slot-level kernels for simulation loops that never materialize a length-n
/// transcript: encode_slot_values returns the |slots| transmitted values in
/// slot order; decode_slots consumes |slots| received values in slot order.
std::vector<double> encode_slot_values(const std::vector<std::uint8_t>& message,
                                       const SecretKey& key,
                                       const SchemeParams& params);
std::vector<std::uint8_t> decode_slots(const std::vector<double>& slot_values,
                                       const SecretKey& key,
                                       const SchemeParams& params);

/// Text round trip: header "n=<n> slots=<count> pad=<count>", slot indices
/// delta-encoded (first index, then gaps), pad bits packed four per hex digit.
void store_key(const SecretKey& key, std::ostream& out);
void store_key_file(const SecretKey& key, const std::string& path);
SecretKey load_key(std::istream& in);
SecretKey load_key_file(const std::string& path);

}  // namespace covertlab
