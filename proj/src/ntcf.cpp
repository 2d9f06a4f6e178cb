#include "cvqc/ntcf.hpp"

#include <bit>
#include <cstdint>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {

// Public key layout: [A_0 .. A_{m-1}] (κ bits each), [B_0 .. B_{κ-1}] (m bits
// each), A·s (m bits). Secret key layout: s, then the same A and B rows.
std::size_t image_bits(std::size_t kappa) { return 2 * kappa; }

BitString mat_vec(const std::vector<BitString>& rows, std::size_t first, std::size_t count, const BitString& x) {
  BitString out(count);
  for (std::size_t j = 0; j < count; ++j) out.set(j, rows[first + j].dot(x));
  return out;
}

std::uint64_t to_mask(const BitString& b) { return b.empty() ? 0 : b.words()[0]; }

void check_pk(const NtcfPublicKey& pk) {
  const std::size_t m = image_bits(pk.kappa);
  require(pk.data.size() == m + pk.kappa + 1, "ntcf: malformed public key");
}

// Left inverse of the m×κ matrix whose rows are `a` (bit i of row j at position
// i), or nullopt when A does not have full column rank.
std::optional<std::vector<BitString>> left_inverse(const std::vector<std::uint64_t>& a, std::size_t kappa) {
  const std::size_t m = a.size();
  // Pick κ independent rows greedily.
  std::vector<std::uint64_t> basis;
  std::vector<std::size_t> picked;
  std::vector<std::uint64_t> reduced;
  for (std::size_t j = 0; j < m && picked.size() < kappa; ++j) {
    std::uint64_t v = a[j];
    for (auto r : reduced)
      if (v & (std::uint64_t{1} << std::countr_zero(r))) v ^= r;
    if (v == 0) continue;
    for (auto& r : reduced)
      if (r & (std::uint64_t{1} << std::countr_zero(v))) r ^= v;
    reduced.push_back(v);
    picked.push_back(j);
  }
  if (picked.size() < kappa) return std::nullopt;

  // Gauss-Jordan on the square selection S (row k = a[picked[k]]).
  std::vector<std::uint64_t> s(kappa), inv(kappa);
  for (std::size_t k = 0; k < kappa; ++k) {
    s[k] = a[picked[k]];
    inv[k] = std::uint64_t{1} << k;
  }
  for (std::size_t c = 0; c < kappa; ++c) {
    std::size_t p = c;
    while (p < kappa && !((s[p] >> c) & 1u)) ++p;
    if (p == kappa) return std::nullopt;
    std::swap(s[p], s[c]);
    std::swap(inv[p], inv[c]);
    for (std::size_t r = 0; r < kappa; ++r)
      if (r != c && ((s[r] >> c) & 1u)) {
        s[r] ^= s[c];
        inv[r] ^= inv[c];
      }
  }
  // inv now holds E with E·S = I, so x = E·y_picked. Spread E's columns
  // back to their positions in the full image.
  std::vector<BitString> b(kappa, BitString(image_bits(kappa)));
  for (std::size_t i = 0; i < kappa; ++i)
    for (std::size_t k = 0; k < kappa; ++k)
      if ((inv[i] >> k) & 1u) b[i].set(picked[k], true);
  return b;
}

}  // namespace

NtcfKeyMaterial HiddenShiftNtcf::keygen(std::size_t kappa, Rng& rng) const {
  require(kappa >= 2, "ntcf keygen: kappa must be at least 2");
  require(kappa <= 64, "ntcf keygen: mock instantiation supports kappa <= 64");
  const std::size_t m = image_bits(kappa);
  std::vector<std::uint64_t> a(m);
  std::optional<std::vector<BitString>> b;
  do {
    for (auto& row : a) row = to_mask(rng.bits(kappa));
    b = left_inverse(a, kappa);
  } while (!b);

  BitString s;
  do {
    s = rng.bits(kappa);
  } while (s.none());

  NtcfKeyMaterial km;
  km.pk.kappa = km.sk.kappa = kappa;
  std::vector<BitString> rows;
  for (auto row : a) rows.push_back(BitString::from_word(row, kappa));
  km.pk.data = rows;
  km.pk.data.insert(km.pk.data.end(), b->begin(), b->end());
  km.pk.data.push_back(mat_vec(rows, 0, m, s));

  km.sk.data.push_back(s);
  km.sk.data.insert(km.sk.data.end(), rows.begin(), rows.end());
  km.sk.data.insert(km.sk.data.end(), b->begin(), b->end());
  return km;
}

BitString HiddenShiftNtcf::eval(const NtcfPublicKey& pk, int b, const BitString& x) const {
  check_pk(pk);
  require(x.size() == pk.kappa, "ntcf eval: input length must be kappa");
  const std::size_t m = image_bits(pk.kappa);
  BitString y = mat_vec(pk.data, 0, m, x);
  if (b) y ^= pk.data.back();
  return y;
}

ClawResult HiddenShiftNtcf::eval_claw(const NtcfPublicKey& pk, Rng& rng) const {
  check_pk(pk);
  const std::size_t m = image_bits(pk.kappa);
  // The measured image is uniform over the 2^κ images; the shift is what the
  // post-measurement superposition physically contains.
  const BitString x0 = rng.bits(pk.kappa);
  const BitString shift = mat_vec(pk.data, m, pk.kappa, pk.data.back());
  return {eval(pk, 0, x0), x0, x0 ^ shift};
}

std::optional<BitString> HiddenShiftNtcf::dec(const NtcfSecretKey& sk, int b, const BitString& y) const {
  const std::size_t kappa = sk.kappa;
  const std::size_t m = image_bits(kappa);
  require(sk.data.size() == 1 + m + kappa, "ntcf dec: malformed secret key");
  if (y.size() != m) return std::nullopt;
  BitString z = mat_vec(sk.data, 1 + m, kappa, y);
  if (mat_vec(sk.data, 1, m, z) != y) return std::nullopt;
  if (b) z ^= sk.data.front();
  return z;
}

bool HiddenShiftNtcf::chk(const NtcfPublicKey& pk, int b, const BitString& x, const BitString& y) const {
  check_pk(pk);
  if (x.size() != pk.kappa || y.size() != image_bits(pk.kappa)) return false;
  return eval(pk, b, x) == y;
}

nlohmann::json to_json(const NtcfPublicKey& pk) {
  nlohmann::json data = nlohmann::json::array();
  for (const auto& d : pk.data) data.push_back(d.to_hex());
  return {{"kappa", pk.kappa}, {"data", data}};
}

nlohmann::json to_json(const NtcfSecretKey& sk) {
  nlohmann::json data = nlohmann::json::array();
  for (const auto& d : sk.data) data.push_back(d.to_hex());
  return {{"kappa", sk.kappa}, {"data", data}};
}

}  // namespace cvqc
