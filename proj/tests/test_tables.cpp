#include <gtest/gtest.h>

#include "cvqc/errors.hpp"
#include "cvqc/tables.hpp"

using namespace cvqc;

namespace {

KeyPair random_pair(Rng& rng, std::size_t n) {
  BitString a = rng.bits(n), b = rng.bits(n);
  while (b == a) b = rng.bits(n);
  return {a, b};
}

}  // namespace

TEST(Tables, Z8Encoding) {
  for (int v = 0; v < 8; ++v) EXPECT_EQ(z8_from_bits(z8_bits(v)), Z8(v));
  EXPECT_EQ(z8_bits(5).to_binary(), "101");
  EXPECT_THROW(z8_from_bits(BitString(4)), ContractError);
}

TEST(Tables, EncryptLayoutAgainstOracle) {
  RandomOracle oracle(seed_from_hex("30"));
  Rng rng(seed_from_hex("31"));
  const std::size_t kappa = 10;
  const BitString key = rng.bits(2 * kappa);
  const BitString r = rng.bits(kappa);
  const Ciphertext c = encrypt(key, r, Group::Xor, kappa, oracle, rng);
  EXPECT_EQ(c.masked, oracle.query(c.pad + key, kappa) ^ r);
  EXPECT_EQ(c.tag, oracle.query(c.tag_pad + key, kappa));

  const Ciphertext z = encrypt(key, z8_bits(6), Group::Z8, kappa, oracle, rng);
  const int h = static_cast<int>(oracle.query(z.pad + key, 3).to_uint());
  EXPECT_EQ(static_cast<int>(z.masked.to_uint()), (h + 6) % 8);
  EXPECT_THROW(encrypt(key, BitString(4), Group::Z8, kappa, oracle, rng), ContractError);
}

// True if some row's key cannot avoid a tag clash with another table key for
// any choice of tag pad.
static bool unavoidable_clash(const LookupTable& table, const KeyPair& h, const KeyPair& k, Oracle& oracle) {
  std::vector<BitString> keys;
  for (int bh = 0; bh < 2; ++bh)
    for (int b = 0; b < 2; ++b) keys.push_back(h[bh] + k[b]);
  for (const auto& key : keys) {
    bool some_clean = false;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << table.kappa) && !some_clean; ++r) {
      const BitString pad = BitString::from_uint(r, table.kappa);
      const BitString tag = oracle.query(pad + key, table.kappa);
      bool clean = true;
      for (const auto& other : keys)
        if (other != key && oracle.query(pad + other, table.kappa) == tag) clean = false;
      some_clean = clean;
    }
    if (!some_clean) return true;
  }
  return false;
}

TEST(Tables, PhaseTableOpensOncePerKey) {
  RandomOracle oracle(seed_from_hex("32"));
  Rng rng(seed_from_hex("33"));
  int clashes = 0;
  for (std::size_t kappa : {2u, 3u, 8u, 16u}) {
    for (int t = 0; t < 200; ++t) {
      const KeyPair h = random_pair(rng, kappa), k = random_pair(rng, kappa);
      const PhasePair p{static_cast<int>(rng.below(8)), static_cast<int>(rng.below(8))};
      const LookupTable table = make_phase_table(h, k, p, kappa, oracle, rng);
      ASSERT_EQ(table.rows.size(), 4u);
      for (int bh = 0; bh < 2; ++bh)
        for (int b = 0; b < 2; ++b) {
          const RowMatch m = decrypt_row(table, h[bh] + k[b], oracle);
          if (!m.ok() && kappa <= 3) {
            // Only acceptable when every possible tag pad clashes for some row.
            EXPECT_TRUE(unavoidable_clash(table, h, k, oracle)) << "kappa " << kappa;
            ++clashes;
            continue;
          }
          ASSERT_TRUE(m.ok()) << "kappa " << kappa;
          EXPECT_EQ(z8_from_bits(m.plaintext), p[b]);
        }
    }
  }
  EXPECT_LT(clashes, 400);  // of 1600 small-κ opens
}

TEST(Tables, CombineTableEncodesParity) {
  RandomOracle oracle(seed_from_hex("34"));
  Rng rng(seed_from_hex("35"));
  const std::size_t kappa = 8;
  for (int t = 0; t < 200; ++t) {
    const KeyPair a = random_pair(rng, 2 * kappa), b = random_pair(rng, kappa);
    const BitString r0 = rng.bits(kappa);
    BitString r1 = rng.bits(kappa);
    while (r1 == r0) r1 = rng.bits(kappa);
    const LookupTable table = make_combine_table(a, b, r0, r1, kappa, oracle, rng);
    for (int ba = 0; ba < 2; ++ba)
      for (int bb = 0; bb < 2; ++bb) {
        const RowMatch m = decrypt_row(table, a[ba] + b[bb], oracle);
        ASSERT_TRUE(m.ok());
        EXPECT_EQ(m.plaintext, (ba ^ bb) ? r1 : r0);
      }
  }
  const KeyPair a = random_pair(rng, 8);
  EXPECT_THROW(make_combine_table(a, a, BitString(8), BitString(8), kappa, oracle, rng), ContractError);
}

TEST(Tables, ForeignKeyRarelyOpens) {
  RandomOracle oracle(seed_from_hex("36"));
  Rng rng(seed_from_hex("37"));
  const std::size_t kappa = 16;
  int opened = 0;
  for (int t = 0; t < 500; ++t) {
    const KeyPair h = random_pair(rng, kappa), k = random_pair(rng, kappa);
    const LookupTable table = make_phase_table(h, k, {1, 2}, kappa, oracle, rng);
    opened += decrypt_row(table, rng.bits(2 * kappa), oracle).status != RowMatch::Status::NoMatch;
  }
  // Four rows, each a false match with probability 2^-16.
  EXPECT_LE(opened, 1);
}

TEST(Tables, RowOrderIsShuffled) {
  RandomOracle oracle(seed_from_hex("38"));
  Rng rng(seed_from_hex("39"));
  const std::size_t kappa = 12;
  std::array<int, 4> first_row_owner{};
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const KeyPair h = random_pair(rng, kappa), k = random_pair(rng, kappa);
    const LookupTable table = make_phase_table(h, k, {0, 0}, kappa, oracle, rng);
    for (int j = 0; j < 4; ++j)
      if (decrypt_row(table, h[j / 2] + k[j % 2], oracle).row == 0) ++first_row_owner[j];
  }
  for (int c : first_row_owner) EXPECT_NEAR(c, trials / 4.0, 5 * std::sqrt(trials * 0.1875));
}

TEST(Tables, JsonRoundTrip) {
  RandomOracle oracle(seed_from_hex("3a"));
  Rng rng(seed_from_hex("3b"));
  const std::size_t kappa = 9;
  const KeyPair h = random_pair(rng, kappa), k = random_pair(rng, kappa);
  const LookupTable phase = make_phase_table(h, k, {3, 7}, kappa, oracle, rng);
  const LookupTable back = table_from_json(nlohmann::json::parse(to_json(phase).dump()), kappa);
  ASSERT_EQ(back.rows.size(), 4u);
  EXPECT_EQ(back.group, Group::Z8);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(back.rows[i].pad, phase.rows[i].pad);
    EXPECT_EQ(back.rows[i].masked, phase.rows[i].masked);
    EXPECT_EQ(back.rows[i].tag_pad, phase.rows[i].tag_pad);
    EXPECT_EQ(back.rows[i].tag, phase.rows[i].tag);
  }
  EXPECT_EQ(z8_from_bits(decrypt_row(back, h.x1 + k.x1, oracle).plaintext), Z8(7));
  EXPECT_THROW(table_from_json({{"group", "Z7"}, {"rows", nlohmann::json::array()}}, kappa), ContractError);
}
