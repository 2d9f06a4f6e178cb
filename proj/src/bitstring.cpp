#include "cvqc/bitstring.hpp"

#include <array>
#include <bit>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {
constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }
}  // namespace

BitString::BitString(std::size_t size) : size_(size), words_(words_for(size), 0) {}

BitString BitString::from_word(std::uint64_t word, std::size_t size) {
  require(size <= 64, "BitString::from_word: at most 64 bits");
  BitString b(size);
  if (size) b.words_[0] = word;
  b.trim();
  return b;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t size) {
  require(size <= 64, "BitString::from_uint: size exceeds 64 bits");
  BitString out(size);
  for (std::size_t i = 0; i < size; ++i) out.set(i, (value >> (size - 1 - i)) & 1u);
  return out;
}

BitString BitString::from_binary(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] == '0' || bits[i] == '1', "BitString::from_binary: bad digit");
    out.set(i, bits[i] == '1');
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t size) {
  require(hex.size() == (size + 3) / 4, "BitString::from_hex: length mismatch");
  BitString out(size);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[d];
    unsigned v = 0;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ContractError("BitString::from_hex: bad digit");
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t i = d * 4 + k;
      const bool bit = (v >> (3 - k)) & 1u;
      if (i < size) out.set(i, bit);
      else require(!bit, "BitString::from_hex: nonzero padding");
    }
  }
  return out;
}

void BitString::set(std::size_t i, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (v) words_[i >> 6] |= mask;
  else words_[i >> 6] &= ~mask;
}

std::uint64_t BitString::to_uint() const {
  require(size_ <= 64, "BitString::to_uint: more than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < size_; ++i) v = (v << 1) | static_cast<std::uint64_t>(get(i));
  return v;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  require(offset + length <= size_, "BitString::slice: out of range");
  BitString out(length);
  if ((offset & 63) == 0) {
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = words_[(offset >> 6) + w];
    out.trim();
    return out;
  }
  for (std::size_t i = 0; i < length; ++i) out.set(i, get(offset + i));
  return out;
}

void BitString::append(const BitString& other) {
  const std::size_t shift = size_ & 63;
  const std::size_t new_size = size_ + other.size_;
  words_.resize(words_for(new_size), 0);
  if (shift == 0) {
    std::copy(other.words_.begin(), other.words_.end(), words_.begin() + (size_ >> 6));
  } else {
    std::size_t base = size_ >> 6;
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
      words_[base + w] |= other.words_[w] << shift;
      if (base + w + 1 < words_.size()) words_[base + w + 1] |= other.words_[w] >> (64 - shift);
    }
  }
  size_ = new_size;
  trim();
}

void BitString::append_bit(bool v) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, v);
}

bool BitString::none() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t BitString::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitString::first_set() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  return size_;
}

bool BitString::dot(const BitString& other) const {
  require(size_ == other.size_, "BitString::dot: size mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return std::popcount(acc) & 1;
}

BitString& BitString::operator^=(const BitString& other) {
  require(size_ == other.size_, "BitString::operator^=: size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::string BitString::to_binary() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s((size_ + 3) / 4, '0');
  for (std::size_t d = 0; d < s.size(); ++d) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t i = d * 4 + k;
      v = (v << 1) | ((i < size_ && get(i)) ? 1u : 0u);
    }
    s[d] = kDigits[v];
  }
  return s;
}

void BitString::serialize(std::vector<std::uint8_t>& out) const {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(std::uint64_t{size_} >> (8 * k)));
  // Storage is least-significant-first within each byte lane; the encoding
  // wants the first bit in the top position, so each byte is bit-reversed.
  static constexpr auto kReverse = [] {
    std::array<std::uint8_t, 256> t{};
    for (int v = 0; v < 256; ++v) {
      int r = 0;
      for (int k = 0; k < 8; ++k) r |= ((v >> k) & 1) << (7 - k);
      t[v] = static_cast<std::uint8_t>(r);
    }
    return t;
  }();
  const std::size_t nbytes = (size_ + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) out.push_back(kReverse[(words_[b / 8] >> ((b % 8) * 8)) & 0xffu]);
}

void BitString::trim() {
  if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

std::size_t BitStringHash::operator()(const BitString& b) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ b.size();
  for (auto w : b.words()) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace cvqc
