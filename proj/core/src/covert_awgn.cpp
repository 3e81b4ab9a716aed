#include "covertlab/covert_awgn.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "covertlab/errors.hpp"

namespace covertlab {

namespace {

std::uint64_t message_index(const std::vector<std::uint8_t>& message) {
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < message.size(); ++j) {
    if (message[j] > 1) throw InvalidInput("message entries must be bits");
    if (message[j]) idx |= std::uint64_t{1} << j;
  }
  return idx;
}

// Codeword `row` of the public codebook, regenerated on demand so that 2^k
// rows never need to be stored. Depends only on (public_seed, row, len).
std::vector<std::uint8_t> ml_row(const MlCodebook& mode, std::uint64_t row,
                                 std::uint64_t len) {
  RandomStream rs = RandomStream(mode.public_seed, "ml_codebook_row").derive(row);
  std::vector<std::uint8_t> bits(len);
  std::uint64_t word = 0;
  for (std::uint64_t i = 0; i < len; ++i) {
    if (i % 64 == 0) word = rs.next_u64();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

}  // namespace

void SecretKey::validate() const {
  if (pad.size() != slots.size())
    throw InvalidInput("key: pad length must equal slot count");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= n) throw InvalidInput("key: slot index out of range");
    if (i > 0 && slots[i] <= slots[i - 1])
      throw InvalidInput("key: slot indices must be strictly increasing");
    if (pad[i] > 1) throw InvalidInput("key: pad entries must be bits");
  }
}

SchemeParams SchemeParams::sqrt_law(std::uint64_t n, double tau, double a,
                                    EccMode ecc) {
  if (n == 0) throw InvalidParameter("sqrt_law: n must be >= 1");
  if (!(tau > 0.0)) throw InvalidParameter("sqrt_law: tau must be > 0");
  const double q = tau / std::sqrt(static_cast<double>(n));
  if (q > 1.0)
    throw InvalidParameter("sqrt_law: tau/sqrt(n) exceeds 1; lower tau or raise n");
  SchemeParams p;
  p.n = n;
  p.q = q;
  p.a = a;
  p.ecc = std::move(ecc);
  p.tau = tau;
  p.validate();
  return p;
}

void SchemeParams::validate() const {
  if (n == 0) throw InvalidParameter("scheme: n must be >= 1");
  if (!(q >= 0.0 && q <= 1.0))
    throw InvalidParameter("scheme: q must be in [0, 1]");
  if (!(a > 0.0)) throw InvalidParameter("scheme: a must be > 0");
  if (!(tau > 0.0)) throw InvalidParameter("scheme: tau must be > 0");
  if (const auto* rep = std::get_if<Repetition>(&ecc)) {
    if (rep->m == 0)
      throw InvalidParameter("scheme: repetition factor must be >= 1");
  } else {
    const auto& ml = std::get<MlCodebook>(ecc);
    if (ml.k == 0 || ml.k > 20)
      throw InvalidParameter("scheme: codebook k must be in [1, 20]");
  }
}

RepetitionPlan plan_auto_repetition(std::uint64_t slot_count, double a,
                                    double sigma_b2) {
  if (!(a > 0.0)) throw InvalidParameter("plan_auto_repetition: a must be > 0");
  if (!(sigma_b2 >= 0.0))
    throw InvalidParameter("plan_auto_repetition: sigma_b2 must be >= 0");
  auto m_for = [&](std::uint64_t k) -> std::uint64_t {
    const double raw =
        2.0 * (sigma_b2 / (a * a)) * std::log(10.0 * static_cast<double>(k));
    const double m = std::ceil(raw);
    return m > 5.0 ? static_cast<std::uint64_t>(m) : 5u;
  };
  std::uint64_t k = 0;
  while ((k + 1) * m_for(k + 1) <= slot_count) ++k;
  const std::uint64_t m = m_for(k == 0 ? 1 : k);
  return {k, static_cast<std::uint32_t>(m)};
}

SecretKey gen_key(const SchemeParams& params, RandomStream& stream) {
  params.validate();
  SecretKey key;
  key.n = params.n;
  key.slots = sample_index_subset(stream, params.n, params.q);
  key.pad.resize(key.slots.size());
  for (auto& b : key.pad)
    b = static_cast<std::uint8_t>(stream.next_u64() >> 63);
  return key;
}

std::vector<std::uint8_t> ecc_encode(const std::vector<std::uint8_t>& message,
                                     const EccMode& mode,
                                     std::uint64_t target_len) {
  if (const auto* rep = std::get_if<Repetition>(&mode)) {
    if (rep->m == 0)
      throw InvalidParameter("ecc_encode: repetition factor must be >= 1");
    const std::uint64_t max_k = target_len / rep->m;
    if (message.size() > max_k)
      throw CapacityError("ecc_encode: message needs more than target_len slots",
                          max_k);
    std::vector<std::uint8_t> coded(target_len, 0);
    for (std::size_t j = 0; j < message.size(); ++j) {
      if (message[j] > 1) throw InvalidInput("message entries must be bits");
      for (std::uint64_t i = 0; i < rep->m; ++i)
        coded[j * rep->m + i] = message[j];
    }
    return coded;
  }
  const auto& ml = std::get<MlCodebook>(mode);
  if (ml.k > 20) throw InvalidParameter("ecc_encode: codebook k must be <= 20");
  if (message.size() > ml.k)
    throw CapacityError("ecc_encode: message longer than codebook dimension",
                        ml.k);
  return ml_row(ml, message_index(message), target_len);
}

std::uint64_t plan_capacity(const SchemeParams& params, const SecretKey& key) {
  params.validate();
  const std::uint64_t s = key.slots.size();
  if (const auto* rep = std::get_if<Repetition>(&params.ecc))
    return s / rep->m;
  const auto& ml = std::get<MlCodebook>(params.ecc);
  return s >= ml.k ? ml.k : 0;
}

std::vector<double> encode_slot_values(const std::vector<std::uint8_t>& message,
                                       const SecretKey& key,
                                       const SchemeParams& params) {
  key.validate();
  if (key.n != params.n)
    throw InvalidInput("encode: key and params disagree on n");
  const std::uint64_t cap = plan_capacity(params, key);
  if (message.size() > cap)
    throw CapacityError("encode: message exceeds key capacity", cap);
  // Undersized key: nothing is sent at all (capacity was reported as 0).
  if (cap == 0) return std::vector<double>(key.slots.size(), 0.0);
  const auto coded = ecc_encode(message, params.ecc, key.slots.size());
  std::vector<double> values(key.slots.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const unsigned bit = static_cast<unsigned>(coded[i] ^ key.pad[i]) & 1u;
    values[i] = bit ? -params.a : params.a;
  }
  return values;
}

std::vector<double> encode(const std::vector<std::uint8_t>& message,
                           const SecretKey& key, const SchemeParams& params) {
  const auto values = encode_slot_values(message, key, params);
  std::vector<double> x(params.n, 0.0);
  for (std::size_t i = 0; i < key.slots.size(); ++i)
    x[key.slots[i]] = values[i];
  return x;
}

std::vector<std::uint8_t> decode_slots(const std::vector<double>& slot_values,
                                       const SecretKey& key,
                                       const SchemeParams& params) {
  key.validate();
  if (key.n != params.n)
    throw InvalidInput("decode: key and params disagree on n");
  if (slot_values.size() != key.slots.size())
    throw InvalidInput("decode_slots: expected one value per slot");
  const std::uint64_t cap = plan_capacity(params, key);
  if (cap == 0) return {};

  // Pad correction: z_i sits near +a when the coded bit was 0, -a when 1.
  std::vector<double> z(slot_values.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = key.pad[i] ? -slot_values[i] : slot_values[i];

  if (const auto* rep = std::get_if<Repetition>(&params.ecc)) {
    std::vector<std::uint8_t> out(cap);
    for (std::uint64_t j = 0; j < cap; ++j) {
      double s = 0.0;
      for (std::uint64_t i = j * rep->m; i < (j + 1) * rep->m; ++i) s += z[i];
      out[j] = s < 0.0 ? 1 : 0;  // exact tie decides 0, deterministically
    }
    return out;
  }

  const auto& ml = std::get<MlCodebook>(params.ecc);
  const std::uint64_t rows = std::uint64_t{1} << ml.k;
  std::uint64_t best = 0;
  double best_corr = -std::numeric_limits<double>::infinity();
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto row = ml_row(ml, r, z.size());
    double c = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) c += row[i] ? -z[i] : z[i];
    if (c > best_corr) {  // strict: ties stay with the lowest row index
      best_corr = c;
      best = r;
    }
  }
  std::vector<std::uint8_t> out(ml.k);
  for (std::uint32_t j = 0; j < ml.k; ++j)
    out[j] = static_cast<std::uint8_t>((best >> j) & 1u);
  return out;
}

std::vector<std::uint8_t> decode(const std::vector<double>& y,
                                 const SecretKey& key,
                                 const SchemeParams& params) {
  if (y.size() != params.n)
    throw InvalidInput("decode: transcript length must equal n");
  std::vector<double> slot_values(key.slots.size());
  for (std::size_t i = 0; i < key.slots.size(); ++i) {
    if (key.slots[i] >= y.size())
      throw InvalidInput("decode: slot index out of transcript range");
    slot_values[i] = y[key.slots[i]];
  }
  return decode_slots(slot_values, key, params);
}

void store_key(const SecretKey& key, std::ostream& out) {
  key.validate();
  out << "n=" << key.n << " slots=" << key.slots.size()
      << " pad=" << key.pad.size() << "\n";
  for (std::size_t i = 0; i < key.slots.size(); ++i) {
    const std::uint32_t delta =
        i == 0 ? key.slots[0] : key.slots[i] - key.slots[i - 1];
    out << delta << (i + 1 == key.slots.size() ? '\n' : ' ');
  }
  if (!key.pad.empty()) {
    static const char* digits = "0123456789abcdef";
    std::vector<unsigned> nibbles((key.pad.size() + 3) / 4, 0u);
    for (std::size_t i = 0; i < key.pad.size(); ++i)
      if (key.pad[i]) nibbles[i / 4] |= 8u >> (i % 4);
    std::string hex;
    hex.reserve(nibbles.size());
    for (unsigned v : nibbles) hex.push_back(digits[v]);
    out << hex << "\n";
  }
  if (!out) throw IoError("store_key: write failed");
}

void store_key_file(const SecretKey& key, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("store_key: cannot open " + path);
  store_key(key, out);
}

SecretKey load_key(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidInput("key file: missing header");
  std::uint64_t n = 0, slot_count = 0, pad_count = 0;
  if (std::sscanf(header.c_str(),
                  "n=%" SCNu64 " slots=%" SCNu64 " pad=%" SCNu64, &n,
                  &slot_count, &pad_count) != 3)
    throw InvalidInput("key file: malformed header: " + header);
  if (pad_count != slot_count)
    throw InvalidInput("key file: pad count must equal slot count");

  SecretKey key;
  key.n = n;
  key.slots.reserve(slot_count);
  std::uint64_t position = 0;
  for (std::uint64_t i = 0; i < slot_count; ++i) {
    std::uint64_t delta = 0;
    if (!(in >> delta)) throw InvalidInput("key file: truncated slot list");
    position = i == 0 ? delta : position + delta;
    if (position >= n || position > std::numeric_limits<std::uint32_t>::max())
      throw InvalidInput("key file: slot index out of range");
    key.slots.push_back(static_cast<std::uint32_t>(position));
  }
  if (pad_count > 0) {
    std::string hex;
    if (!(in >> hex)) throw InvalidInput("key file: missing pad bits");
    if (hex.size() != (pad_count + 3) / 4)
      throw InvalidInput("key file: pad hex length mismatch");
    key.pad.resize(pad_count);
    for (std::uint64_t i = 0; i < pad_count; ++i) {
      const char c = hex[i / 4];
      int value;
      if (c >= '0' && c <= '9') value = c - '0';
      else if (c >= 'a' && c <= 'f') value = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') value = c - 'A' + 10;
      else throw InvalidInput("key file: bad pad hex digit");
      key.pad[i] = static_cast<std::uint8_t>((value >> (3 - i % 4)) & 1);
    }
  }
  key.validate();
  return key;
}

SecretKey load_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_key: cannot open " + path);
  try {
    return load_key(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace covertlab
