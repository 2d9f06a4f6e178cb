#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvqc/adversary.hpp"
#include "cvqc/protocol.hpp"

namespace cvqc {

struct RateEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval; z = 1.96 gives the 95% interval.
RateEstimate wilson(std::size_t successes, std::size_t trials, double z = 1.96);

struct ExperimentConfig {
  std::size_t L = 8;
  std::size_t kappa = 16;
  std::size_t sessions = 1000;
  std::string strategy = "honest";
  Seed seed{};
  /// Worker threads; 0 means one per available core.
  unsigned threads = 0;
  PlanOverride overrides;
  bool probe = false;
};

/// Session j uses derive_seed(seed, "session", j), so the batch is the same
/// whatever the thread count.
std::vector<SessionOutcome> run_batch(const ExperimentConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy);

struct ExperimentReport {
  ExperimentConfig config;
  std::map<std::string, std::size_t> round_type_counts;
  std::map<std::string, std::size_t> branch_counts;
  std::map<std::string, std::size_t> branch_failures;
  RateEstimate pass_rate;
  RateEstimate test_pass_rate;
  RateEstimate win_rate_quiz;            // wins / quiz rounds
  RateEstimate win_rate_unconditional;   // wins / sessions
  RateEstimate bias_pass_rate;           // InPhTest rounds with δ in {0, 4}
  std::size_t comp_rounds = 0;
  double mean_comp_fidelity = 0.0;
  double min_comp_fidelity = 1.0;
  double seconds_per_session = 0.0;
};

ExperimentReport summarize(const ExperimentConfig& cfg, const std::vector<SessionOutcome>& outcomes);
ExperimentReport estimate_rates(const ExperimentConfig& cfg, const Ntcf& ntcf);

/// Wall-clock timing is left out unless asked for, so reports replay exactly.
nlohmann::json to_json(const ExperimentReport& r, bool include_timing = false);
nlohmann::json to_json(const RateEstimate& r);

struct ScalingPoint {
  std::size_t L = 0;
  double mean_seconds = 0.0;
};

/// Mean time of honest sessions forced into the output branch (setup,
/// AddPhaseWithHelper, decode) for each L in the ascending grid.
std::vector<ScalingPoint> scaling_bench(std::size_t kappa, const std::vector<std::size_t>& L_grid,
                                        std::size_t sessions_per_L, const Seed& seed);

/// Slopes between consecutive points and the ratios of consecutive slopes.
std::vector<double> local_slopes(const std::vector<ScalingPoint>& points);
std::vector<double> slope_ratios(const std::vector<ScalingPoint>& points);

}  // namespace cvqc
