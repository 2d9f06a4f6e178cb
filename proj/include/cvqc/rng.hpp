#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "cvqc/bitstring.hpp"

namespace cvqc {

using Seed = std::array<std::uint8_t, 32>;

/// Parses a hex seed of any nonempty length and condenses it to 32 bytes.
/// Exactly 64 hex digits are used as-is, so seed_to_hex output round-trips.
Seed seed_from_hex(std::string_view hex);
std::string seed_to_hex(const Seed& seed);

/// Counter-mode expansion: an independent child seed per (label, index).
Seed derive_seed(const Seed& parent, std::string_view label, std::uint64_t index);

/// Session-local random source. All draws use explicit integer arithmetic so
/// the stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(const Seed& seed);

  std::uint64_t next() { return engine_(); }
  bool coin() { return next() >> 63; }
  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  BitString bits(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Uniform κ-bit string from the session randomness.
BitString fresh_pad(Rng& rng, std::size_t kappa);

}  // namespace cvqc
