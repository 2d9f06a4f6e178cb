#include "cvqc/oracle.hpp"

#include <string_view>

#include "cvqc/errors.hpp"
#include "xof.hpp"

namespace cvqc {

namespace {

void check_length(const BitString& input, std::size_t out_bits) {
  require(out_bits >= 1, "oracle query: output length must be positive");
  const std::size_t n = input.size();
  require(out_bits <= n * n, "oracle query: output length exceeds the square of the input length");
}

}  // namespace

BitString RandomOracle::query(const BitString& input, std::size_t out_bits) {
  check_length(input, out_bits);
  Key key{input, out_bits};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  std::vector<std::uint8_t> encoded;
  input.serialize(encoded);
  for (int k = 0; k < 8; ++k) encoded.push_back(static_cast<std::uint8_t>(std::uint64_t{out_bits} >> (8 * k)));
  static constexpr std::string_view kDomain = "cvqc/ro";
  const std::span<const std::uint8_t> parts[] = {
      {reinterpret_cast<const std::uint8_t*>(kDomain.data()), kDomain.size()}, seed_, encoded};
  const auto bytes = detail::shake256(parts, (out_bits + 7) / 8);

  BitString out(out_bits);
  for (std::size_t i = 0; i < out_bits; ++i) out.set(i, (bytes[i / 8] >> (7 - i % 8)) & 1u);
  cache_.emplace(std::move(key), out);
  return out;
}

bool BlindPattern::matches(const BitString& input) const {
  if (input.size() < pad_bits + key.size()) return false;
  return input.slice(pad_bits, key.size()) == key;
}

bool OracleView::is_blinded(const BitString& input) const {
  for (const auto& p : patterns_)
    if (p.matches(input)) return true;
  return false;
}

BitString OracleView::query(const BitString& input, std::size_t out_bits) {
  check_length(input, out_bits);
  return is_blinded(input) ? fresh_.query(input, out_bits) : base_->query(input, out_bits);
}

OracleView blind(RandomOracle& oracle, std::vector<BlindPattern> patterns, const Seed& resample_seed) {
  for (const auto& p : patterns) require(!p.key.empty(), "blind: pattern key must be nonempty");
  return OracleView(oracle, std::move(patterns), resample_seed);
}

}  // namespace cvqc
