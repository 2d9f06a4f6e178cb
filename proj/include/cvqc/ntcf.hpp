#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cvqc/bitstring.hpp"
#include "cvqc/rng.hpp"

namespace cvqc {

/// Opaque key material. The layout of `data` belongs to the instantiation that
/// generated it; callers only pass keys back to the same family.
struct NtcfPublicKey {
  std::size_t kappa = 0;
  std::vector<BitString> data;
};

struct NtcfSecretKey {
  std::size_t kappa = 0;
  std::vector<BitString> data;
};

struct NtcfKeyMaterial {
  NtcfPublicKey pk;
  NtcfSecretKey sk;
};

/// Post-measurement result of an honest evaluation on |+>^κ: the image and the
/// claw the server's register is left in.
struct ClawResult {
  BitString y;
  BitString x0;
  BitString x1;
};

/// Trapdoor claw-free function family.
class Ntcf {
 public:
  virtual ~Ntcf() = default;

  virtual NtcfKeyMaterial keygen(std::size_t kappa, Rng& rng) const = 0;
  virtual ClawResult eval_claw(const NtcfPublicKey& pk, Rng& rng) const = 0;
  /// Preimage on branch b, or nullopt when y is not a valid image.
  virtual std::optional<BitString> dec(const NtcfSecretKey& sk, int b, const BitString& y) const = 0;
  virtual bool chk(const NtcfPublicKey& pk, int b, const BitString& x, const BitString& y) const = 0;
};

/// Mock instantiation: f(b, x) = A·(x xor b·s) over GF(2), with A a random
/// injective 2κ×κ matrix and s a hidden nonzero shift. The public key carries
/// A, a left inverse of A, and A·s, which is enough to evaluate both branches
/// and to check claws. It is exactly 2-to-1 and has a working trapdoor, but it
/// is not claw-free against code that solves for s; simulated servers never do.
/// Supports 2 <= κ <= 64.
class HiddenShiftNtcf final : public Ntcf {
 public:
  NtcfKeyMaterial keygen(std::size_t kappa, Rng& rng) const override;
  ClawResult eval_claw(const NtcfPublicKey& pk, Rng& rng) const override;
  std::optional<BitString> dec(const NtcfSecretKey& sk, int b, const BitString& y) const override;
  bool chk(const NtcfPublicKey& pk, int b, const BitString& x, const BitString& y) const override;

  /// f(b, x) computed from the public key.
  BitString eval(const NtcfPublicKey& pk, int b, const BitString& x) const;
};

nlohmann::json to_json(const NtcfPublicKey& pk);
nlohmann::json to_json(const NtcfSecretKey& sk);

}  // namespace cvqc
