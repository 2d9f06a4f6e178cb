#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "cvqc/adversary.hpp"
#include "cvqc/protocol.hpp"

namespace cvqc {

/// Optimal quiz-conditioned win probability, cos^2(π/8)/3 = (2 + √2)/12.
inline constexpr double kOpt = 0.28451779686442459;
inline constexpr double kPTest = 0.8;
inline constexpr double kPQuiz = 0.1;
inline constexpr double kPComp = 0.1;

struct AmplificationConfig {
  std::size_t L = 8;
  std::size_t kappa = 16;
  std::size_t N_temp = 2000;
  double win_slack = 0.02;
  std::size_t N_rspv = 100;
  Seed seed{};
  /// Applied to every pre-RSPV session; for experiments that pin a branch.
  PlanOverride overrides;

  /// Throws ContractError unless N_temp, N_rspv >= 1 and 0 < win_slack < OPT.
  void validate() const;
  /// Win counts at or below this fail the temp round.
  double win_threshold() const;
};

AmplificationConfig amplification_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AmplificationConfig& cfg);

struct TempOutcome {
  Flag flag = Flag::Pass;
  bool comp = false;  // the picked session was a comp round
  std::optional<SessionOutputs> outputs;
  std::size_t wins = 0;
  std::size_t sessions_run = 0;
  std::size_t picked = 0;
  std::string reason;  // why the round failed
};

/// N_temp independent pre-RSPV sessions. Fails if any session fails (the run
/// stops there) or the win count is at most the threshold; otherwise reports
/// the round type and outputs of a uniformly picked session.
TempOutcome run_pre_rspv_temp(const AmplificationConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy,
                              const Seed& seed);

struct RspvOutcome {
  Flag flag = Flag::Fail;
  std::optional<SessionOutputs> outputs;
  std::size_t temps_run = 0;
  std::string reason;
};

/// Up to N_rspv temp rounds; stops at the first comp pick.
RspvOutcome run_rspv(const AmplificationConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy);

/// Decides on the prepared outputs; must be a pure function of them.
using VerifierPlugin = std::function<bool(const SessionOutputs&)>;

/// Accepts iff the server's decoded state has fidelity >= 1 - 1e-9 with the
/// client's θ-vector. Reads the simulated server state directly.
bool fidelity_verifier(const SessionOutputs& outputs);

struct CvqcOutcome {
  bool accept = false;
  RspvOutcome rspv;
};

/// RSPV with L = circuit_size, then the verifier on its outputs.
CvqcOutcome run_cvqc(std::size_t circuit_size, AmplificationConfig cfg, const Ntcf& ntcf,
                     const StrategyFactory& strategy, const VerifierPlugin& verifier);

/// e^{-δ²N/4}, the tail bound Pr[count >= (1+δ)pN] for N streaming samples.
double chernoff_bound(double p, double delta, double N);

nlohmann::json to_json(const TempOutcome& t);
nlohmann::json to_json(const RspvOutcome& r);

}  // namespace cvqc
