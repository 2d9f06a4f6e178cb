#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "cvqc/bitstring.hpp"
#include "cvqc/oracle.hpp"
#include "cvqc/rng.hpp"
#include "cvqc/types.hpp"

namespace cvqc {

/// Plaintext group of a table. Z8 plaintexts are 3-bit strings added mod 8;
/// Xor plaintexts are κ-bit strings added bitwise.
enum class Group { Z8, Xor };

std::size_t plaintext_bits(Group group, std::size_t kappa);

/// One row: (R, H(R||k) + p) followed by the key-authentication pair (R', H(R'||k)).
struct Ciphertext {
  BitString pad;
  BitString masked;
  BitString tag_pad;
  BitString tag;
};

struct LookupTable {
  Group group = Group::Z8;
  std::size_t kappa = 0;
  std::vector<Ciphertext> rows;
};

Ciphertext encrypt(const BitString& key, const BitString& plaintext, Group group, std::size_t kappa,
                   Oracle& oracle, Rng& rng);

struct RowMatch {
  enum class Status { Match, NoMatch, Collision };
  Status status = Status::NoMatch;
  std::size_t row = 0;
  BitString plaintext;

  bool ok() const { return status == Status::Match; }
};

/// Finds the row whose authentication tag verifies under `key` and unmasks it.
RowMatch decrypt_row(const LookupTable& table, const BitString& key, Oracle& oracle);

/// Four rows x^helper_b || x_b' -> θ_b'. Rows are shuffled, and each of the four
/// keys opens exactly one row (rows are redrawn on a tag clash between them;
/// below κ≈4 a clash can be unavoidable and is then left in place).
LookupTable make_phase_table(const KeyPair& helper, const KeyPair& target, const PhasePair& phases,
                             std::size_t kappa, Oracle& oracle, Rng& rng);

/// Four rows a_b || b_b' -> r_{b xor b'}. Same row guarantees as above. r0 != r1.
LookupTable make_combine_table(const KeyPair& a, const KeyPair& b, const BitString& r0,
                               const BitString& r1, std::size_t kappa, Oracle& oracle, Rng& rng);

BitString z8_bits(Z8 v);
Z8 z8_from_bits(const BitString& bits);

nlohmann::json to_json(const LookupTable& table);
LookupTable table_from_json(const nlohmann::json& j, std::size_t kappa);

}  // namespace cvqc
