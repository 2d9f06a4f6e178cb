#pragma once

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cvqc/bitstring.hpp"
#include "cvqc/rng.hpp"

namespace cvqc {

/// Anything that answers random-oracle queries. Output length is capped at the
/// square of the input length; longer requests throw ContractError.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual BitString query(const BitString& input, std::size_t out_bits) = 0;
};

/// Lazily sampled random oracle. Entries are drawn from SHAKE256 keyed by the
/// seed and memoised, so a session replays bit-exactly from its seed.
class RandomOracle final : public Oracle {
 public:
  explicit RandomOracle(const Seed& seed) : seed_(seed) {}

  BitString query(const BitString& input, std::size_t out_bits) override;

  const Seed& seed() const { return seed_; }
  std::size_t cached_entries() const { return cache_.size(); }

 private:
  struct Key {
    BitString input;
    std::size_t out_bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return BitStringHash{}(k.input) * 31u + k.out_bits;
    }
  };

  Seed seed_;
  std::unordered_map<Key, BitString, KeyHash> cache_;
};

/// Inputs of the form {0,1}^pad_bits || key || anything.
struct BlindPattern {
  std::size_t pad_bits;
  BitString key;

  bool matches(const BitString& input) const;
};

/// A view of a base oracle whose blinded entries are replaced by fresh values
/// drawn from an independent seed. The base oracle is never modified.
class OracleView final : public Oracle {
 public:
  OracleView(RandomOracle& base, std::vector<BlindPattern> patterns, const Seed& resample_seed)
      : base_(&base), patterns_(std::move(patterns)), fresh_(resample_seed) {}

  BitString query(const BitString& input, std::size_t out_bits) override;

  bool is_blinded(const BitString& input) const;

 private:
  RandomOracle* base_;
  std::vector<BlindPattern> patterns_;
  RandomOracle fresh_;
};

OracleView blind(RandomOracle& oracle, std::vector<BlindPattern> patterns, const Seed& resample_seed);

}  // namespace cvqc
