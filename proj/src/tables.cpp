#include "cvqc/tables.hpp"

#include <array>
#include <utility>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {

BitString group_add(Group group, const BitString& a, const BitString& b) {
  if (group == Group::Z8) return z8_bits(z8_from_bits(a) + z8_from_bits(b));
  return a ^ b;
}

BitString group_sub(Group group, const BitString& a, const BitString& b) {
  if (group == Group::Z8) return z8_bits(z8_from_bits(a) - z8_from_bits(b));
  return a ^ b;
}

void shuffle_rows(std::vector<Ciphertext>& rows, Rng& rng) {
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
}

}  // namespace

std::size_t plaintext_bits(Group group, std::size_t kappa) { return group == Group::Z8 ? 3 : kappa; }

BitString z8_bits(Z8 v) { return BitString::from_uint(static_cast<std::uint64_t>(v.value()), 3); }

Z8 z8_from_bits(const BitString& bits) {
  require(bits.size() == 3, "z8_from_bits: expected 3 bits");
  return Z8(static_cast<int>(bits.to_uint()));
}

Ciphertext encrypt(const BitString& key, const BitString& plaintext, Group group, std::size_t kappa,
                   Oracle& oracle, Rng& rng) {
  const std::size_t len = plaintext_bits(group, kappa);
  require(plaintext.size() == len, "encrypt: plaintext is not a group element");
  Ciphertext c;
  c.pad = rng.bits(kappa);
  c.masked = group_add(group, oracle.query(c.pad + key, len), plaintext);
  c.tag_pad = rng.bits(kappa);
  c.tag = oracle.query(c.tag_pad + key, kappa);
  return c;
}

RowMatch decrypt_row(const LookupTable& table, const BitString& key, Oracle& oracle) {
  RowMatch result;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (oracle.query(row.tag_pad + key, table.kappa) == row.tag) {
      if (++matches == 1) result.row = i;
    }
  }
  if (matches == 0) {
    result.status = RowMatch::Status::NoMatch;
    return result;
  }
  if (matches > 1) {
    result.status = RowMatch::Status::Collision;
    return result;
  }
  const auto& row = table.rows[result.row];
  const std::size_t len = plaintext_bits(table.group, table.kappa);
  result.status = RowMatch::Status::Match;
  result.plaintext = group_sub(table.group, row.masked, oracle.query(row.pad + key, len));
  return result;
}

namespace {

constexpr int kMaxRedraws = 256;

// Encrypts four rows and redraws any row whose tag would also verify under
// another of the table's own keys, so each intended key opens exactly one row.
LookupTable build_table(Group group, std::size_t kappa, const std::array<BitString, 4>& keys,
                        const std::array<BitString, 4>& plaintexts, Oracle& oracle, Rng& rng) {
  LookupTable table{group, kappa, {}};
  for (std::size_t i = 0; i < 4; ++i) table.rows.push_back(encrypt(keys[i], plaintexts[i], group, kappa, oracle, rng));
  for (std::size_t i = 0; i < 4; ++i) {
    auto ambiguous = [&] {
      for (std::size_t j = 0; j < 4; ++j)
        if (j != i && oracle.query(table.rows[i].tag_pad + keys[j], kappa) == table.rows[i].tag) return true;
      return false;
    };
    // At tiny κ every tag pad may clash; give up after a bounded number of tries.
    for (int tries = 0; tries < kMaxRedraws && ambiguous(); ++tries)
      table.rows[i] = encrypt(keys[i], plaintexts[i], group, kappa, oracle, rng);
  }
  shuffle_rows(table.rows, rng);
  return table;
}

}  // namespace

LookupTable make_phase_table(const KeyPair& helper, const KeyPair& target, const PhasePair& phases,
                             std::size_t kappa, Oracle& oracle, Rng& rng) {
  require(helper.x0 != helper.x1 && target.x0 != target.x1, "make_phase_table: keys must be distinct");
  std::array<BitString, 4> keys, plaintexts;
  for (int bh = 0; bh < 2; ++bh)
    for (int b = 0; b < 2; ++b) {
      keys[2 * bh + b] = helper[bh] + target[b];
      plaintexts[2 * bh + b] = z8_bits(phases[b]);
    }
  return build_table(Group::Z8, kappa, keys, plaintexts, oracle, rng);
}

LookupTable make_combine_table(const KeyPair& a, const KeyPair& b, const BitString& r0,
                               const BitString& r1, std::size_t kappa, Oracle& oracle, Rng& rng) {
  require(r0 != r1, "make_combine_table: r0 and r1 must differ");
  require(a.x0 != a.x1 && b.x0 != b.x1, "make_combine_table: keys must be distinct");
  std::array<BitString, 4> keys, plaintexts;
  for (int ba = 0; ba < 2; ++ba)
    for (int bb = 0; bb < 2; ++bb) {
      keys[2 * ba + bb] = a[ba] + b[bb];
      plaintexts[2 * ba + bb] = (ba ^ bb) ? r1 : r0;
    }
  return build_table(Group::Xor, kappa, keys, plaintexts, oracle, rng);
}

nlohmann::json to_json(const LookupTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r;
    r["R"] = row.pad.to_hex();
    if (table.group == Group::Z8) r["ct"] = z8_from_bits(row.masked).value();
    else r["ct"] = row.masked.to_hex();
    r["Rp"] = row.tag_pad.to_hex();
    r["tag"] = row.tag.to_hex();
    rows.push_back(std::move(r));
  }
  return {{"group", table.group == Group::Z8 ? "Z8" : "XOR"}, {"rows", std::move(rows)}};
}

LookupTable table_from_json(const nlohmann::json& j, std::size_t kappa) {
  LookupTable table;
  table.kappa = kappa;
  const auto group = j.at("group").get<std::string>();
  require(group == "Z8" || group == "XOR", "table_from_json: unknown group");
  table.group = group == "Z8" ? Group::Z8 : Group::Xor;
  for (const auto& r : j.at("rows")) {
    Ciphertext c;
    c.pad = BitString::from_hex(r.at("R").get<std::string>(), kappa);
    if (table.group == Group::Z8) c.masked = z8_bits(Z8(r.at("ct").get<int>()));
    else c.masked = BitString::from_hex(r.at("ct").get<std::string>(), kappa);
    c.tag_pad = BitString::from_hex(r.at("Rp").get<std::string>(), kappa);
    c.tag = BitString::from_hex(r.at("tag").get<std::string>(), kappa);
    table.rows.push_back(std::move(c));
  }
  return table;
}

}  // namespace cvqc
