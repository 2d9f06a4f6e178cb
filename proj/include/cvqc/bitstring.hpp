#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace cvqc {

/// Packed bit string. Bit 0 is the leftmost bit; concatenation appends on the
/// right, so `a + b` reads as a || b.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size);

  /// The low `size` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t size);
  /// Parses a string of '0'/'1' characters.
  static BitString from_binary(std::string_view bits);
  /// Inverse of to_hex() for a known bit length.
  static BitString from_hex(std::string_view hex, std::size_t size);
  /// Bit i taken from bit i of `word` (least significant first). size <= 64.
  static BitString from_word(std::uint64_t word, std::size_t size);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  /// Interprets the string as an unsigned integer (first bit most significant).
  /// Requires size() <= 64.
  std::uint64_t to_uint() const;

  BitString slice(std::size_t offset, std::size_t length) const;
  BitString prefix(std::size_t length) const { return slice(0, length); }
  BitString suffix(std::size_t length) const { return slice(size_ - length, length); }

  void append(const BitString& other);
  void append_bit(bool v);

  bool none() const;
  std::size_t popcount() const;
  /// Index of the first set bit, or size() if none.
  std::size_t first_set() const;

  /// Inner product mod 2. Sizes must match.
  bool dot(const BitString& other) const;

  BitString& operator^=(const BitString& other);

  std::string to_binary() const;
  /// Hex digits, four bits per digit, zero padded on the right to a whole digit.
  std::string to_hex() const;

  /// Canonical byte encoding: 8-byte little-endian length then the bits packed
  /// eight per byte, first bit in the most significant position.
  void serialize(std::vector<std::uint8_t>& out) const;

  /// Packed storage: bit i lives at bit (i mod 64) of word i / 64.
  std::span<const std::uint64_t> words() const { return {words_.data(), words_.size()}; }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }
  friend BitString operator+(BitString a, const BitString& b) {
    a.append(b);
    return a;
  }

 private:
  void trim();

  std::size_t size_ = 0;
  // Keys, pads and tags fit inline; only combined keys spill to the heap.
  boost::container::small_vector<std::uint64_t, 2> words_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& b) const noexcept;
};

}  // namespace cvqc
