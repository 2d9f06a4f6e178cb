#include "cvqc/rng.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "cvqc/errors.hpp"
#include "xof.hpp"

namespace cvqc {

namespace {

std::span<const std::uint8_t> bytes_of(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

Seed seed_from_hex(std::string_view hex) {
  require(!hex.empty(), "seed: empty hex string");
  std::string padded(hex);
  if (padded.size() % 2) padded.insert(padded.begin(), '0');
  std::vector<std::uint8_t> raw;
  for (std::size_t i = 0; i < padded.size(); i += 2) {
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int hi = nibble(padded[i]), lo = nibble(padded[i + 1]);
    require(hi >= 0 && lo >= 0, "seed: not a hex string");
    raw.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  Seed seed{};
  // A full-width seed (as echoed in reports) is taken verbatim so it round-trips.
  if (raw.size() == seed.size() && hex.size() == 2 * seed.size()) {
    std::copy(raw.begin(), raw.end(), seed.begin());
    return seed;
  }
  const std::span<const std::uint8_t> parts[] = {bytes_of("cvqc/seed"), raw};
  const auto out = detail::shake256(parts, 32);
  std::copy(out.begin(), out.end(), seed.begin());
  return seed;
}

std::string seed_to_hex(const Seed& seed) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (auto b : seed) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

Seed derive_seed(const Seed& parent, std::string_view label, std::uint64_t index) {
  std::array<std::uint8_t, 8> counter{};
  for (int k = 0; k < 8; ++k) counter[k] = static_cast<std::uint8_t>(index >> (8 * k));
  const std::uint8_t label_len = static_cast<std::uint8_t>(label.size());
  const std::span<const std::uint8_t> parts[] = {bytes_of("cvqc/derive"), parent,
                                                 {&label_len, 1}, bytes_of(label), counter};
  const auto out = detail::shake256(parts, 32);
  Seed seed{};
  std::copy(out.begin(), out.end(), seed.begin());
  return seed;
}

Rng::Rng(const Seed& seed) {
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < 8; ++i)
    words[i] = static_cast<std::uint32_t>(seed[4 * i]) | (static_cast<std::uint32_t>(seed[4 * i + 1]) << 8) |
               (static_cast<std::uint32_t>(seed[4 * i + 2]) << 16) |
               (static_cast<std::uint32_t>(seed[4 * i + 3]) << 24);
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
  require(n > 0, "Rng::below: empty range");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % n;
  }
}

BitString Rng::bits(std::size_t n) {
  // Bit k of each 64-bit draw becomes the k-th bit of its chunk.
  if (n <= 64) return BitString::from_word(n ? next() : 0, n);
  BitString out;
  for (std::size_t i = 0; i < n; i += 64) out.append(BitString::from_word(next(), std::min<std::size_t>(64, n - i)));
  return out;
}

BitString fresh_pad(Rng& rng, std::size_t kappa) { return rng.bits(kappa); }

}  // namespace cvqc
