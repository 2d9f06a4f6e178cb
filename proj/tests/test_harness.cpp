#include <gtest/gtest.h>

#include <cmath>

#include "cvqc/errors.hpp"
#include "cvqc/harness.hpp"

using namespace cvqc;

namespace {

const HiddenShiftNtcf kNtcf;

ExperimentConfig base(std::size_t sessions, const char* seed) {
  ExperimentConfig cfg;
  cfg.L = 3;
  cfg.kappa = 10;
  cfg.sessions = sessions;
  cfg.seed = seed_from_hex(seed);
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(Wilson, KnownValues) {
  // 7 of 20 at 95%: the textbook interval [0.1812, 0.5671].
  const auto r = wilson(7, 20);
  EXPECT_NEAR(r.rate, 0.35, 1e-15);
  EXPECT_NEAR(r.lo, 0.1812, 1e-4);
  EXPECT_NEAR(r.hi, 0.5671, 1e-4);
  const auto zero = wilson(0, 10);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
  const auto all = wilson(10, 10);
  EXPECT_EQ(all.hi, 1.0);
  EXPECT_LT(all.lo, 1.0);
  EXPECT_EQ(wilson(0, 0).trials, 0u);
  EXPECT_LT(wilson(50, 100, 4.0).lo, wilson(50, 100).lo);
}

TEST(Wilson, CoverageCalibration) {
  Rng rng(seed_from_hex("90"));
  for (double p : {0.02845, 0.28451779686, 0.8}) {
    const int metas = 2000, n = 400;
    int covered = 0;
    for (int m = 0; m < metas; ++m) {
      std::size_t k = 0;
      for (int i = 0; i < n; ++i) k += rng.bernoulli(p);
      const auto r = wilson(k, n);
      covered += r.lo <= p && p <= r.hi;
    }
    EXPECT_GE(static_cast<double>(covered) / metas, 0.93) << p;
  }
}

TEST(Batch, ThreadCountDoesNotChangeResults) {
  auto cfg = base(300, "91");
  const auto one = run_batch(cfg, kNtcf, parse_strategy("honest"));
  cfg.threads = 3;
  const auto three = run_batch(cfg, kNtcf, parse_strategy("honest"));
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(to_json(one[i]).dump(), to_json(three[i]).dump());
  EXPECT_EQ(to_json(summarize(cfg, one)).dump(), to_json(summarize(cfg, three)).dump());
}

TEST(Batch, ErrorsPropagate) {
  auto cfg = base(10, "92");
  cfg.threads = 2;
  StrategyFactory boom = []() -> std::unique_ptr<Strategy> { throw ContractError("boom"); };
  EXPECT_THROW(run_batch(cfg, kNtcf, boom), ContractError);
  cfg.sessions = 0;
  EXPECT_THROW(run_batch(cfg, kNtcf, parse_strategy("honest")), ContractError);
}

TEST(Report, CountsAndRates) {
  const auto cfg = base(3000, "93");
  const auto r = estimate_rates(cfg, kNtcf);
  std::size_t total = 0;
  for (const auto& [k, v] : r.round_type_counts) total += v;
  EXPECT_EQ(total, cfg.sessions);
  std::size_t branches = 0;
  for (const auto& [k, v] : r.branch_counts) branches += v;
  EXPECT_EQ(branches, cfg.sessions);
  EXPECT_EQ(r.win_rate_quiz.trials, r.round_type_counts.at("quiz"));
  for (const auto* e : {&r.pass_rate, &r.test_pass_rate, &r.win_rate_quiz, &r.win_rate_unconditional})
    EXPECT_TRUE(0.0 <= e->lo && e->lo <= e->rate && e->rate <= e->hi && e->hi <= 1.0);
  EXPECT_EQ(r.comp_rounds, r.round_type_counts.at("comp"));
  EXPECT_EQ(r.min_comp_fidelity, 1.0);
  EXPECT_GT(r.seconds_per_session, 0.0);

  const auto j = to_json(r);
  EXPECT_FALSE(j.contains("seconds_per_session"));
  EXPECT_TRUE(to_json(r, true).contains("seconds_per_session"));
  EXPECT_EQ(j["config"]["seed"], seed_to_hex(cfg.seed));
}

TEST(Report, Deterministic) {
  const auto cfg = base(500, "94");
  EXPECT_EQ(to_json(estimate_rates(cfg, kNtcf)).dump(), to_json(estimate_rates(cfg, kNtcf)).dump());
}

TEST(Scaling, SlopeArithmetic) {
  const std::vector<ScalingPoint> pts = {{1, 1.0}, {2, 3.0}, {4, 7.0}, {8, 19.0}};
  EXPECT_EQ(local_slopes(pts), (std::vector<double>{2.0, 2.0, 3.0}));
  EXPECT_EQ(slope_ratios(pts), (std::vector<double>{1.0, 1.5}));
}

TEST(Scaling, BenchRuns) {
  const auto pts = scaling_bench(8, {1, 4, 16}, 3, seed_from_hex("95"));
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) EXPECT_GT(p.mean_seconds, 0.0);
  EXPECT_EQ(pts[2].L, 16u);
  EXPECT_LT(pts[0].mean_seconds, pts[2].mean_seconds);
  EXPECT_THROW(scaling_bench(8, {4, 2}, 1, seed_from_hex("95")), ContractError);
  EXPECT_THROW(scaling_bench(8, {}, 1, seed_from_hex("95")), ContractError);
}
