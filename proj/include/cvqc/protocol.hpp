#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvqc/gadget.hpp"
#include "cvqc/ntcf.hpp"
#include "cvqc/oracle.hpp"
#include "cvqc/rng.hpp"
#include "cvqc/strategy.hpp"
#include "cvqc/transcript.hpp"
#include "cvqc/types.hpp"

namespace cvqc {

enum class RoundType { Test, Quiz, Comp };
enum class Flag { Pass, Fail };
enum class Score { None, Win, Lose };

/// Which subprotocol the client runs. StdBTestAll is the top-level standard
/// basis test on all 2+L gadgets; the others follow AddPhaseWithHelper.
enum class Branch { StdBTestAll, StdBTest, CoPhTest, InPhTest, BNTest, Output };

const char* to_string(RoundType t);
const char* to_string(Flag f);
const char* to_string(Score s);
const char* to_string(Branch b);
std::optional<Branch> branch_from_string(std::string_view name);
RoundType round_type_of(Branch b);

/// Every client-side choice of one session, drawn before any message flows.
struct RoundPlan {
  Branch branch = Branch::StdBTestAll;
  int delta = 0;                  // InPhTest bias, one of 0, 4, 1
  bool hadamard_branch = false;   // CoPhTest/BNTest: Hadamard test vs standard-basis check
  std::vector<bool> subset;       // BNTest index set I over [L], never empty
};

/// Forces parts of the plan. The RNG is consumed exactly as without overrides.
struct PlanOverride {
  std::optional<Branch> branch;
  std::optional<int> delta;
  std::optional<bool> hadamard_branch;
  std::optional<std::vector<bool>> subset;
};

/// Draws in a fixed order: top coin, sub-branch, δ, test coin, subset bits.
RoundPlan sample_plan(std::size_t L, Rng& client_rng, const PlanOverride& override_ = {});

struct SessionConfig {
  std::size_t L = 8;
  std::size_t kappa = 16;
  bool record_transcript = true;
  PlanOverride overrides;
  /// Collect the probability of every realised measurement outcome.
  bool probe = false;
};

/// Client-side state. Index 0 of `keys`/`thetas` is the test-only gadget.
struct ClientSecrets {
  KeyPair helper;
  std::vector<KeyPair> keys;
  std::vector<PhasePair> thetas;
  std::vector<NtcfSecretKey> trapdoors;  // slot 0 = helper, slot 1+i = gadget i
};

struct SessionOutputs {
  std::vector<Z8> client_thetas;
  std::optional<DecodedOutput> server;  // absent when the server's state could not be decoded
  double fidelity = 0.0;
};

struct SessionOutcome {
  RoundType round_type = RoundType::Test;
  Flag flag = Flag::Pass;
  Score score = Score::None;
  std::optional<SessionOutputs> outputs;
  RoundPlan plan;
  std::string fail_step;  // step label of the first failed check
  std::vector<double> measurement_probs;
};

/// One pre-RSPV session between the client and a server strategy. The
/// subprotocol methods are public so they can be driven one at a time.
class Session {
 public:
  Session(const SessionConfig& config, const Ntcf& ntcf, Strategy& strategy, const Seed& seed);

  const RoundPlan& plan() const { return plan_; }
  const ClientSecrets& secrets() const { return secrets_; }
  const Transcript& transcript() const { return transcript_; }
  Transcript& transcript() { return transcript_; }
  RandomOracle& oracle() { return oracle_; }
  /// Server holdings: slot 0 is the helper, slot 1+i is gadget i.
  std::span<const Gadget> holdings() const { return held_; }
  bool consumed(std::size_t slot) const { return consumed_[slot]; }

  Flag run_setup();
  /// Standard-basis test on every unconsumed gadget (helper included if held).
  Flag run_stdb_test(std::string_view label);
  Flag run_add_phase();

  struct HadamardResult {
    Flag flag = Flag::Pass;
    Score score = Score::None;
    BitString d;
  };
  /// RO-padded Hadamard test on the gadget in `slot`. With `theta` the client
  /// first reveals θ1 − θ0 − δ (δ = 0 when absent). δ = 4 inverts the pass
  /// condition; δ = 1 scores instead of flagging.
  HadamardResult run_hadamard_test(const KeyPair& K, std::optional<PhasePair> theta, std::optional<int> delta,
                                   std::size_t slot, std::string_view label);

  Flag run_coph_test(bool hadamard_branch);
  HadamardResult run_inph_test(int delta);
  Flag run_bn_test(const std::vector<bool>& subset, bool hadamard_branch);
  SessionOutputs run_output();

  /// The full dispatcher following the plan.
  SessionOutcome run();

 private:
  ServerView view(std::string_view context);
  Gadget& take(std::size_t slot);
  Flag fail(std::string step);
  bool check_member(const KeyPair& K, const BitString& reported) const;

  SessionConfig config_;
  const Ntcf& ntcf_;
  Strategy& strategy_;
  RandomOracle oracle_;
  Rng client_rng_;
  Rng server_rng_;
  Transcript transcript_;
  RoundPlan plan_;
  ClientSecrets secrets_;
  std::vector<Gadget> held_;
  std::vector<bool> consumed_;
  std::string fail_step_;
  std::vector<double> probes_;
};

struct SessionResult {
  SessionOutcome outcome;
  Transcript transcript;
};

SessionResult run_pre_rspv(const SessionConfig& config, const Ntcf& ntcf, Strategy& strategy, const Seed& seed);

nlohmann::json to_json(const SessionOutcome& outcome);

}  // namespace cvqc
