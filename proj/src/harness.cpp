#include "cvqc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "cvqc/errors.hpp"

namespace cvqc {

RateEstimate wilson(std::size_t k, std::size_t n, double z) {
  RateEstimate r;
  r.successes = k;
  r.trials = n;
  if (n == 0) return r;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  r.rate = p;
  // Clamp: rounding at k = 0 or k = n can put the bound a ulp past the rate.
  r.lo = std::min(p, std::max(0.0, centre - half));
  r.hi = std::max(p, std::min(1.0, centre + half));
  return r;
}

std::vector<SessionOutcome> run_batch(const ExperimentConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy) {
  require(cfg.sessions >= 1, "run_batch: sessions must be at least 1");
  SessionConfig sc;
  sc.L = cfg.L;
  sc.kappa = cfg.kappa;
  sc.record_transcript = false;
  sc.overrides = cfg.overrides;
  sc.probe = cfg.probe;

  std::vector<SessionOutcome> out(cfg.sessions);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.sessions));

  auto work = [&](unsigned t, std::exception_ptr& err) {
    try {
      for (std::size_t j = t; j < cfg.sessions; j += threads) {
        auto server = strategy();
        Session s(sc, ntcf, *server, derive_seed(cfg.seed, "session", j));
        out[j] = s.run();
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  std::vector<std::exception_ptr> errors(threads);
  if (threads == 1) {
    work(0, errors[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, std::ref(errors[t]));
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

ExperimentReport summarize(const ExperimentConfig& cfg, const std::vector<SessionOutcome>& outcomes) {
  ExperimentReport r;
  r.config = cfg;
  for (const char* t : {"test", "quiz", "comp"}) r.round_type_counts[t] = 0;
  std::size_t pass = 0, tests = 0, test_pass = 0, quiz = 0, wins = 0, bias = 0, bias_pass = 0;
  double fid_sum = 0.0;
  for (const auto& o : outcomes) {
    ++r.round_type_counts[to_string(o.round_type)];
    ++r.branch_counts[to_string(o.plan.branch)];
    const bool ok = o.flag == Flag::Pass;
    if (ok) ++pass;
    else ++r.branch_failures[to_string(o.plan.branch)];
    if (o.round_type == RoundType::Test) {
      ++tests;
      if (ok) ++test_pass;
    }
    if (o.round_type == RoundType::Quiz) {
      ++quiz;
      if (o.score == Score::Win) ++wins;
      if (o.plan.delta != 1) {
        ++bias;
        if (ok) ++bias_pass;
      }
    }
    if (o.round_type == RoundType::Comp && ok && o.outputs) {
      ++r.comp_rounds;
      fid_sum += o.outputs->fidelity;
      r.min_comp_fidelity = std::min(r.min_comp_fidelity, o.outputs->fidelity);
    }
  }
  const std::size_t n = outcomes.size();
  r.pass_rate = wilson(pass, n);
  r.test_pass_rate = wilson(test_pass, tests);
  r.win_rate_quiz = wilson(wins, quiz);
  r.win_rate_unconditional = wilson(wins, n);
  r.bias_pass_rate = wilson(bias_pass, bias);
  r.mean_comp_fidelity = r.comp_rounds ? fid_sum / static_cast<double>(r.comp_rounds) : 0.0;
  if (!r.comp_rounds) r.min_comp_fidelity = 0.0;
  return r;
}

ExperimentReport estimate_rates(const ExperimentConfig& cfg, const Ntcf& ntcf) {
  const StrategyFactory factory = parse_strategy(cfg.strategy);
  const auto start = std::chrono::steady_clock::now();
  const auto outcomes = run_batch(cfg, ntcf, factory);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  ExperimentReport r = summarize(cfg, outcomes);
  r.seconds_per_session = elapsed.count() / static_cast<double>(cfg.sessions);
  return r;
}

nlohmann::json to_json(const RateEstimate& r) {
  return {{"successes", r.successes}, {"trials", r.trials}, {"rate", r.rate}, {"ci95", {r.lo, r.hi}}};
}

nlohmann::json to_json(const ExperimentReport& r, bool include_timing) {
  nlohmann::json j = {
      {"config",
       {{"L", r.config.L},
        {"kappa", r.config.kappa},
        {"sessions", r.config.sessions},
        {"strategy", r.config.strategy},
        {"seed", seed_to_hex(r.config.seed)}}},
      {"round_type_counts", r.round_type_counts},
      {"branch_counts", r.branch_counts},
      {"branch_failures", r.branch_failures},
      {"pass_rate", to_json(r.pass_rate)},
      {"test_pass_rate", to_json(r.test_pass_rate)},
      {"win_rate_quiz", to_json(r.win_rate_quiz)},
      {"win_rate_unconditional", to_json(r.win_rate_unconditional)},
      {"bias_test_pass_rate", to_json(r.bias_pass_rate)},
      {"comp_rounds", r.comp_rounds},
      {"mean_comp_fidelity", r.mean_comp_fidelity},
      {"min_comp_fidelity", r.min_comp_fidelity},
  };
  if (r.config.overrides.branch) j["config"]["branch"] = to_string(*r.config.overrides.branch);
  if (include_timing) j["seconds_per_session"] = r.seconds_per_session;
  return j;
}

std::vector<ScalingPoint> scaling_bench(std::size_t kappa, const std::vector<std::size_t>& L_grid,
                                        std::size_t sessions_per_L, const Seed& seed) {
  require(!L_grid.empty(), "scaling_bench: empty grid");
  require(std::is_sorted(L_grid.begin(), L_grid.end()), "scaling_bench: grid must be ascending");
  require(sessions_per_L >= 1, "scaling_bench: sessions_per_L must be at least 1");
  const HiddenShiftNtcf ntcf;
  std::vector<double> total(L_grid.size(), 0.0);

  auto one = [&](std::size_t L, std::uint64_t index) {
    SessionConfig sc;
    sc.L = L;
    sc.kappa = kappa;
    sc.record_transcript = false;
    sc.overrides.branch = Branch::Output;
    HonestStrategy honest;
    const auto start = std::chrono::steady_clock::now();
    Session s(sc, ntcf, honest, derive_seed(seed, "bench." + std::to_string(L), index));
    s.run();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    return dt.count();
  };

  for (std::size_t k = 0; k < L_grid.size(); ++k) one(L_grid[k], ~std::uint64_t{0});  // warm-up
  // Interleave the grid so slow drifts in machine load hit every L alike.
  for (std::size_t rep = 0; rep < sessions_per_L; ++rep)
    for (std::size_t k = 0; k < L_grid.size(); ++k) total[k] += one(L_grid[k], rep);

  std::vector<ScalingPoint> out;
  for (std::size_t k = 0; k < L_grid.size(); ++k)
    out.push_back({L_grid[k], total[k] / static_cast<double>(sessions_per_L)});
  return out;
}

std::vector<double> local_slopes(const std::vector<ScalingPoint>& p) {
  std::vector<double> s;
  for (std::size_t k = 1; k < p.size(); ++k)
    s.push_back((p[k].mean_seconds - p[k - 1].mean_seconds) / static_cast<double>(p[k].L - p[k - 1].L));
  return s;
}

std::vector<double> slope_ratios(const std::vector<ScalingPoint>& p) {
  const auto s = local_slopes(p);
  std::vector<double> r;
  for (std::size_t k = 1; k < s.size(); ++k) r.push_back(s[k] / s[k - 1]);
  return r;
}

}  // namespace cvqc
