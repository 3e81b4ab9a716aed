#include "covertlab/channels.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "covertlab/errors.hpp"

namespace covertlab {

AwgnParams::AwgnParams(double sigma2_arg) : sigma2(sigma2_arg) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InvalidParameter("AwgnParams: sigma2 must be positive and finite");
}

BscParams::BscParams(double p_arg) : p(p_arg) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidParameter("BscParams: p must be in [0, 1]");
}

void Dmc::validate() const {
  if (inputs == 0 || outputs == 0) throw InvalidParameter("Dmc: empty matrix");
  if (probs.size() != inputs * outputs)
    throw InvalidParameter("Dmc: matrix size does not match inputs x outputs");
  if (no_tx_index >= inputs)
    throw InvalidParameter("Dmc: no_tx_index out of range");
  for (std::size_t i = 0; i < inputs; ++i) {
    double sum = 0.0;
    for (std::size_t o = 0; o < outputs; ++o) {
      const double p = at(i, o);
      if (!(p >= 0.0) || !std::isfinite(p))
        throw InvalidParameter("Dmc: entries must be finite and >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw InvalidParameter("Dmc: row " + std::to_string(i) +
                             " does not sum to 1 within 1e-12");
  }
}

std::vector<double> awgn_apply(std::span<const double> x, const AwgnParams& ch,
                               RandomStream& stream) {
  std::vector<double> y(x.size());
  const double sd = std::sqrt(ch.sigma2);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + sd * stream.gaussian();
  return y;
}

std::vector<std::uint8_t> bsc_apply(std::span<const std::uint8_t> bits,
                                    const BscParams& ch, RandomStream& stream) {
  std::vector<std::uint8_t> y(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw InvalidInput("bsc_apply: input is not a bit sequence");
    y[i] = bits[i] ^ (stream.uniform01() < ch.p ? 1 : 0);
  }
  return y;
}

std::vector<std::uint32_t> dmc_apply(std::span<const std::uint32_t> symbols,
                                     const Dmc& ch, RandomStream& stream) {
  ch.validate();
  std::vector<std::uint32_t> y(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= ch.inputs)
      throw InvalidInput("dmc_apply: input symbol out of range");
    const double u = stream.uniform01();
    double acc = 0.0;
    std::uint32_t out = static_cast<std::uint32_t>(ch.outputs - 1);
    for (std::size_t o = 0; o < ch.outputs; ++o) {
      acc += ch.at(symbols[i], o);
      if (u < acc) {
        out = static_cast<std::uint32_t>(o);
        break;
      }
    }
    y[i] = out;  // u >= acc only by rounding slack; last symbol absorbs it
  }
  return y;
}

Dmc dmc_parse(std::istream& in) {
  Dmc ch;
  if (!(in >> ch.inputs >> ch.outputs >> ch.no_tx_index))
    throw InvalidInput("dmc_parse: malformed header (want: inputs outputs no_tx_index)");
  if (ch.inputs == 0 || ch.outputs == 0 || ch.inputs > 4096 || ch.outputs > 4096)
    throw InvalidInput("dmc_parse: unreasonable matrix dimensions");
  ch.probs.resize(ch.inputs * ch.outputs);
  for (auto& p : ch.probs) {
    if (!(in >> p)) throw InvalidInput("dmc_parse: matrix body truncated");
  }
  ch.validate();
  return ch;
}

Dmc dmc_load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("dmc_load_file: cannot open " + path);
  try {
    return dmc_parse(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  } catch (const InvalidParameter& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace covertlab
