#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covertlab {

/// Bad value passed to a library call (out-of-range probability, negative
/// variance, ...).
class InvalidParameter : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Structurally bad input data (empty transcript, malformed file, ...).
class InvalidInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative numeric routine exhausted its budget before reaching the
/// requested tolerance. The best estimate reached is carried along so callers
/// can decide whether it is still usable.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double best)
      : std::runtime_error(what), best_estimate(best) {}
  double best_estimate;
};

/// Message does not fit the available key material; reports the largest
/// message size the key supports.
class CapacityError : public std::length_error {
 public:
  CapacityError(const std::string& what, std::size_t max_bits_arg)
      : std::length_error(what), max_bits(max_bits_arg) {}
  std::size_t max_bits;
};

/// Experiment config failed validation; names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_arg, const std::string& what)
      : std::runtime_error(what), field(std::move(field_arg)) {}
  std::string field;
};

/// Filesystem-level failure (missing file, short read, ...).
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace covertlab
