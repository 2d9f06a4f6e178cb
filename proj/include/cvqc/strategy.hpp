#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cvqc/bitstring.hpp"
#include "cvqc/gadget.hpp"
#include "cvqc/ntcf.hpp"
#include "cvqc/oracle.hpp"
#include "cvqc/rng.hpp"
#include "cvqc/tables.hpp"
#include "cvqc/transcript.hpp"

namespace cvqc {

/// Everything a server hook may look at: public messages, the oracle, its own
/// randomness. Client secrets and trapdoors are not reachable from here.
struct ServerView {
  const Transcript& transcript;
  Oracle& oracle;
  Rng& rng;
  std::size_t kappa;
  /// Name of the subprotocol being executed, e.g. "AddPhase" or "BNTest".
  std::string_view context;
  /// When non-null, measurement hooks append the probability of each outcome
  /// they realise. Used to compare strategies distribution-wise.
  std::vector<double>* probe = nullptr;
};

/// Server behaviour. Every hook defaults to the honest action; attacks
/// override the hooks they tamper with. One instance serves one session.
class Strategy {
 public:
  virtual ~Strategy() = default;

  /// NTCF evaluation block: leaves the post-measurement gadget in `out` and
  /// returns the image sent to the client.
  virtual BitString on_setup(ServerView& view, const Ntcf& ntcf, const NtcfPublicKey& pk, Gadget& out);

  /// A phase table arrives for `target`; `helper` is the helper gadget.
  virtual void on_table_received(ServerView& view, Gadget& target, const Gadget& helper,
                                 const LookupTable& table);

  /// The client revealed a relative phase for `g`.
  virtual void on_dephase(ServerView& view, Gadget& g, Z8 revealed);

  /// Standard-basis measurement request. Returns the reported key.
  virtual BitString on_std_measure(ServerView& view, Gadget& g);

  /// Combine request: fold `next` into `acc` using `table`; returns the
  /// reported r. `acc` receives the combined gadget.
  virtual BitString on_combine_measure(ServerView& view, Gadget& acc, Gadget& next, const LookupTable& table);

  /// RO-padded Hadamard measurement. Returns d.
  virtual BitString on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad);

  /// Output step: the client revealed the key pairs of the output gadgets.
  virtual DecodedOutput on_decode_output(ServerView& view, std::span<const Gadget> gadgets,
                                         std::span<const KeyPair> revealed);
};

}  // namespace cvqc
