// Acceptance suite: one PASS/FAIL line per criterion. Optional positional
// arguments select criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqc/adversary.hpp"
#include "cvqc/amplify.hpp"
#include "cvqc/harness.hpp"
#include "cvqc/reference.hpp"
#include "support/oracles.hpp"

using namespace cvqc;

namespace {

const HiddenShiftNtcf kNtcf;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig experiment(std::size_t L, std::size_t kappa, std::size_t sessions, const char* seed) {
  ExperimentConfig cfg;
  cfg.L = L;
  cfg.kappa = kappa;
  cfg.sessions = sessions;
  cfg.seed = seed_from_hex(seed);
  return cfg;
}

// Criteria 1 and 2 share one batch.
struct HonestBatch {
  ExperimentReport report;
  double seconds = 0.0;
};

const HonestBatch& honest_batch() {
  static const HonestBatch batch = [] {
    HonestBatch b;
    const auto start = std::chrono::steady_clock::now();
    b.report = estimate_rates(experiment(8, 16, 100000, "acc01"), kNtcf);
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return b;
  }();
  return batch;
}

Verdict c1_win_probability() {
  const auto& b = honest_batch();
  const auto& w = b.report.win_rate_quiz;
  const auto ci = wilson(w.successes, w.trials, 4.0);
  const bool inside = ci.lo <= kOpt && kOpt <= ci.hi;
  const bool fast = b.seconds <= 300.0;
  return {inside && fast, fmt("win|quiz %.5f (%zu/%zu), 4-sigma Wilson [%.5f, %.5f] vs OPT %.11f; %.1f s",
                              w.rate, w.successes, w.trials, ci.lo, ci.hi, kOpt, b.seconds)};
}

Verdict c2_round_types() {
  const auto& r = honest_batch().report;
  const double n = static_cast<double>(r.config.sessions);
  bool ok = true;
  std::string detail;
  for (auto [name, p] : {std::pair{"test", 0.8}, std::pair{"quiz", 0.1}, std::pair{"comp", 0.1}}) {
    const double f = static_cast<double>(r.round_type_counts.at(name)) / n;
    const double z = (f - p) / std::sqrt(p * (1 - p) / n);
    ok = ok && std::abs(z) <= 4.0;
    detail += fmt("%s %.5f (z %+.2f) ", name, f, z);
  }
  return {ok, detail};
}

Verdict c3_comp_output() {
  auto cfg = experiment(2, 16, 100000, "acc03");
  cfg.overrides.branch = Branch::Output;
  std::vector<double> cells(64, 0.0);
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& o : run_batch(cfg, kNtcf, parse_strategy("honest"))) {
    if (o.flag != Flag::Pass || !o.outputs || !o.outputs->server) {
      ++bad;
      continue;
    }
    worst = std::max(worst, std::abs(o.outputs->fidelity - 1.0));
    if (std::abs(o.outputs->fidelity - 1.0) > 1e-12) ++bad;
    const auto& t = o.outputs->client_thetas;
    cells[8 * t[0].value() + t[1].value()] += 1;
  }
  const std::vector<double> expected(64, cfg.sessions / 64.0);
  const double stat = oracles::chi_squared_stat(cells, expected);
  const double crit = oracles::chi_squared_critical(63, 0.01);
  return {bad == 0 && stat < crit,
          fmt("%zu comp rounds, %zu off-ideal, max |F-1| %.1e; chi2 %.2f < %.2f (df 63, alpha 0.01)", cfg.sessions,
              bad, worst, stat, crit)};
}

Verdict c4_sampler_exactness() {
  RandomOracle oracle(seed_from_hex("acc04"));
  Rng rng(seed_from_hex("acc04a"));
  double worst = 0.0, worst_class = 0.0;
  int cases = 0;
  for (std::size_t x = 1; x <= 4; ++x)
    for (std::size_t kappa = 1; kappa <= 4; ++kappa)
      for (int phi = 0; phi < 8; ++phi)
        for (int rep = 0; rep < 4; ++rep) {
          BitString x0 = rng.bits(x), x1 = rng.bits(x);
          while (x1 == x0) x1 = rng.bits(x);
          const int t0 = static_cast<int>(rng.below(8));
          const Gadget g = make_gadget({x0, x1}, PhasePair{t0, t0 + phi});
          const BitString pad = rng.bits(kappa);
          const BitString w0 = x0 + oracle.query(pad + x0, kappa), w1 = x1 + oracle.query(pad + x1, kappa);
          const int n = static_cast<int>(x + kappa);
          std::vector<double> exact(std::size_t{1} << n);
          for (std::uint64_t d = 0; d < exact.size(); ++d)
            exact[d] = oracles::hadamard_probability(w0.to_uint(), w1.to_uint(), t0, t0 + phi, d, n);
          worst = std::max(worst, reference::total_variation(exact, reference::hadamard_law_table(g, pad, oracle)));
          // Each realised draw must land on the support with its class probability.
          for (int s = 0; s < 16; ++s) {
            double p = 0.0;
            const BitString d = hadamard_sample(g, pad, oracle, rng, &p);
            worst_class = std::max(worst_class, std::abs(exact[d.to_uint()] * std::ldexp(1.0, n - 1) - p));
          }
          ++cases;
        }
  return {worst < 1e-12 && worst_class < 1e-12,
          fmt("%d cases (|x|, kappa <= 4, 8 phases); max TV vs exact enumeration %.2e; max sampled-class error %.2e",
              cases, worst, worst_class)};
}

// Honest server that remembers whether each Hadamard answer had an all-zero
// pad suffix.
class SuffixWatcher final : public Strategy {
 public:
  BitString on_hadamard_measure(ServerView& v, Gadget& g, const BitString& pad) override {
    BitString d = Strategy::on_hadamard_measure(v, g, pad);
    zero_suffix.push_back(d.suffix(v.kappa).none());
    return d;
  }
  std::vector<bool> zero_suffix;
};

Verdict c5_one_sided_error() {
  const std::size_t kappa = 8, L = 4, trials = 100000;
  const double bound = std::ldexp(1.0, 1 - static_cast<int>(kappa));
  struct Config {
    const char* name;
    Branch branch;
    std::optional<int> delta;
    std::optional<bool> hadamard;
  };
  const Config configs[] = {{"InPh d=0", Branch::InPhTest, 0, std::nullopt},
                            {"InPh d=4", Branch::InPhTest, 4, std::nullopt},
                            {"CoPh-H", Branch::CoPhTest, std::nullopt, true},
                            {"BN-H", Branch::BNTest, std::nullopt, true}};
  bool ok = true;
  std::string detail;
  std::size_t unexplained = 0;
  for (const auto& c : configs) {
    SessionConfig sc;
    sc.L = L;
    sc.kappa = kappa;
    sc.record_transcript = false;
    sc.overrides.branch = c.branch;
    sc.overrides.delta = c.delta;
    sc.overrides.hadamard_branch = c.hadamard;
    std::size_t reached = 0, test_fail = 0, session_fail = 0;
    for (std::size_t j = 0; j < trials; ++j) {
      SuffixWatcher w;
      Session s(sc, kNtcf, w, derive_seed(seed_from_hex("acc05"), c.name, j));
      const auto o = s.run();
      const bool add_phase_failed = o.fail_step.starts_with("AddPhase");
      if (o.flag == Flag::Fail) {
        ++session_fail;
        // The failing check must be a Hadamard test whose answer had a zero suffix.
        if (!o.fail_step.ends_with("hadamard.d") || w.zero_suffix.empty() || !w.zero_suffix.back()) ++unexplained;
      }
      if (add_phase_failed) continue;
      ++reached;
      test_fail += o.flag == Flag::Fail;
    }
    const double rate = static_cast<double>(test_fail) / reached;
    ok = ok && rate <= bound;
    detail += fmt("%s %.5f (session %.5f); ", c.name, rate, static_cast<double>(session_fail) / trials);
  }
  ok = ok && unexplained == 0;
  return {ok, detail + fmt("bound %.5f; failures not explained by a zero suffix: %zu", bound, unexplained)};
}

Verdict c6_conjugate_equivalence() {
  struct Config {
    Branch branch;
    std::optional<int> delta;
    std::optional<bool> hadamard;
    std::optional<std::vector<bool>> subset;
  };
  std::vector<Config> configs = {{Branch::StdBTestAll, {}, {}, {}}, {Branch::StdBTest, {}, {}, {}},
                                 {Branch::Output, {}, {}, {}}};
  for (bool h : {false, true}) configs.push_back({Branch::CoPhTest, {}, h, {}});
  for (int d : {0, 4, 1}) configs.push_back({Branch::InPhTest, d, {}, {}});
  for (bool h : {false, true})
    for (auto sub : {std::vector<bool>{true, false}, std::vector<bool>{false, true}, std::vector<bool>{true, true}})
      configs.push_back({Branch::BNTest, {}, h, sub});

  const std::size_t per_config = 4000;
  std::size_t sessions = 0, mismatched = 0, probes = 0;
  for (std::size_t k = 0; k <= configs.size(); ++k) {
    auto cfg = experiment(2, 6, per_config, "acc06");
    cfg.seed = derive_seed(cfg.seed, "config", k);
    cfg.probe = true;
    if (k < configs.size()) {  // the last pass is unforced
      cfg.overrides.branch = configs[k].branch;
      cfg.overrides.delta = configs[k].delta;
      cfg.overrides.hadamard_branch = configs[k].hadamard;
      cfg.overrides.subset = configs[k].subset;
    }
    const auto h = run_batch(cfg, kNtcf, parse_strategy("honest"));
    const auto c = run_batch(cfg, kNtcf, parse_strategy("conjugate"));
    for (std::size_t i = 0; i < h.size(); ++i) {
      ++sessions;
      probes += h[i].measurement_probs.size();
      if (h[i].round_type != c[i].round_type || h[i].flag != c[i].flag || h[i].score != c[i].score ||
          h[i].measurement_probs != c[i].measurement_probs)
        ++mismatched;
    }
  }
  return {mismatched == 0,
          fmt("%zu configurations + unforced, %zu lockstep session pairs, %zu outcome probabilities compared, "
              "%zu mismatches",
              configs.size(), sessions, probes, mismatched)};
}

Verdict c7_detection_gap() {
  const auto expect_h = oracles::quiz_expectation([](int t) { return t; }, [](int t) { return t; });
  const auto expect_a = oracles::quiz_expectation([](int t) { return t; }, [](int t) { return t + (t == 3); });
  struct Rates {
    double win = 0, bias_pass = 0;
    std::size_t quiz = 0, bias = 0;
  };
  auto measure = [&](const char* strategy, const char* seed) {
    auto cfg = experiment(8, 16, 100000, seed);
    cfg.strategy = strategy;
    cfg.overrides.branch = Branch::InPhTest;
    const auto r = estimate_rates(cfg, kNtcf);
    return Rates{r.win_rate_quiz.rate, r.bias_pass_rate.rate, r.win_rate_quiz.trials, r.bias_pass_rate.trials};
  };
  const Rates h = measure("honest", "acc07");
  const Rates a = measure(R"({"attack":"phase_offset","f":"identity","g":"bump:3"})", "acc07");
  const double win_gap = h.win - a.win, pass_gap = h.bias_pass - a.bias_pass;
  const double exp_win_gap = expect_h.win_given_quiz - expect_a.win_given_quiz;
  const double exp_pass_gap = expect_h.bias_pass - expect_a.bias_pass;
  return {win_gap >= 0.01 && pass_gap >= 0.01,
          fmt("win|quiz honest %.5f attack %.5f gap %.5f (analytic %.5f); delta in {0,4} pass honest %.5f attack "
              "%.5f gap %.5f (analytic %.5f); %zu quiz rounds each",
              h.win, a.win, win_gap, exp_win_gap, h.bias_pass, a.bias_pass, pass_gap, exp_pass_gap, h.quiz)};
}

Verdict c8_amplification() {
  AmplificationConfig cfg;  // L 8, kappa 16, N_temp 2000, win_slack 0.02, N_rspv 100
  const Seed root = seed_from_hex("acc08");
  const auto honest = parse_strategy("honest");

  const std::size_t temps = 50;
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < temps; ++t)
    accepted += run_pre_rspv_temp(cfg, kNtcf, honest, derive_seed(root, "honest.temp", t)).flag == Flag::Pass;
  const double accept_rate = static_cast<double>(accepted) / temps;

  const std::size_t lose_temps = 200;
  std::size_t rejected = 0;
  const auto lose = parse_strategy("always_lose");
  for (std::size_t t = 0; t < lose_temps; ++t)
    rejected += run_pre_rspv_temp(cfg, kNtcf, lose, derive_seed(root, "lose.temp", t)).flag == Flag::Fail;
  const double reject_rate = static_cast<double>(rejected) / lose_temps;

  const std::size_t rspvs = 20;
  std::size_t succeeded = 0;
  for (std::size_t r = 0; r < rspvs; ++r) {
    AmplificationConfig rc = cfg;
    rc.seed = derive_seed(root, "rspv", r);
    succeeded += run_rspv(rc, kNtcf, honest).flag == Flag::Pass;
  }
  const double rspv_rate = static_cast<double>(succeeded) / rspvs;

  const bool formula = chernoff_bound(0.1, 0.0, 2000) == 1.0 &&
                       std::abs(chernoff_bound(0.1, 0.5, 2000) - std::exp(-125.0)) < 1e-60;
  const double exact_accept = oracles::binomial_tail_above(2000, kPQuiz * kOpt, cfg.win_threshold());
  const auto ac = wilson(accepted, temps), rc = wilson(succeeded, rspvs);
  return {accept_rate >= 0.95 && reject_rate >= 0.99 && rspv_rate >= 0.9 && formula,
          fmt("honest temp accept %.3f [%.3f, %.3f] (need >= 0.95; exact binomial %.3f); always_lose reject %.3f "
              "(need >= 0.99); RSPV success %.3f [%.3f, %.3f] (need >= 0.9); chernoff formula %s",
              accept_rate, ac.lo, ac.hi, exact_accept, reject_rate, rspv_rate, rc.lo, rc.hi,
              formula ? "ok" : "wrong")};
}

// Not a criterion: the same desk protocol with a wider slack, to show the
// machinery meets the targets once the threshold clears the win-count noise.
std::string c8_recalibrated() {
  AmplificationConfig cfg;
  cfg.L = 2;
  cfg.win_slack = 0.09;
  const auto honest = parse_strategy("honest");
  const std::size_t temps = 40;
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < temps; ++t)
    accepted += run_pre_rspv_temp(cfg, kNtcf, honest, derive_seed(seed_from_hex("acc08b"), "temp", t)).flag ==
                Flag::Pass;
  const double a = static_cast<double>(accepted) / temps;
  const double exact = oracles::binomial_tail_above(2000, kPQuiz * kOpt, cfg.win_threshold());
  // RSPV succeeds when a comp pick comes before any rejection.
  auto rspv = [](double acc) {
    const double q = acc * (1 - kPComp);
    return acc * kPComp * (1 - std::pow(q, 100)) / (1 - q);
  };
  return fmt("win_slack 0.09, L 2: temp accept %.3f over %zu (exact binomial %.4f); implied RSPV success %.3f "
             "(exact %.3f); at win_slack 0.02 the exact values are %.3f and %.3f",
             a, temps, exact, rspv(a), rspv(exact),
             oracles::binomial_tail_above(2000, kPQuiz * kOpt, AmplificationConfig{}.win_threshold()),
             rspv(oracles::binomial_tail_above(2000, kPQuiz * kOpt, AmplificationConfig{}.win_threshold())));
}

Verdict c9_linear_scaling() {
  const auto pts = scaling_bench(16, {128, 256, 512, 1024}, 20, seed_from_hex("acc09"));
  const auto ratios = slope_ratios(pts);
  bool ok = true;
  std::string detail;
  for (const auto& p : pts) detail += fmt("L=%zu %.2f ms; ", p.L, p.mean_seconds * 1e3);
  for (double r : ratios) {
    ok = ok && r >= 0.7 && r <= 1.3;
    detail += fmt("ratio %.3f ", r);
  }
  detail += fmt("; time(1024)/time(128) %.2f", pts.back().mean_seconds / pts.front().mean_seconds);
  return {ok, detail};
}

Verdict c10_replay() {
  std::size_t compared = 0, differing = 0;
  for (Branch b : {Branch::StdBTestAll, Branch::StdBTest, Branch::CoPhTest, Branch::InPhTest, Branch::BNTest,
                   Branch::Output})
    for (const char* strategy : {"honest", "conjugate", "always_lose", "ghz_collapse"})
      for (int j = 0; j < 5; ++j) {
        SessionConfig sc;
        sc.L = 3;
        sc.kappa = 8;
        sc.overrides.branch = b;
        const Seed seed = derive_seed(seed_from_hex("acc10"), to_string(b), j);
        const auto factory = parse_strategy(strategy);
        auto s1 = factory(), s2 = factory();
        const auto r1 = run_pre_rspv(sc, kNtcf, *s1, seed);
        const auto r2 = run_pre_rspv(sc, kNtcf, *s2, seed);
        ++compared;
        if (r1.transcript.to_jsonl() != r2.transcript.to_jsonl() ||
            to_json(r1.outcome).dump() != to_json(r2.outcome).dump())
          ++differing;
      }
  auto cfg = experiment(4, 12, 3000, "acc10");
  cfg.threads = 1;
  const std::string serial = to_json(estimate_rates(cfg, kNtcf)).dump();
  const std::string again = to_json(estimate_rates(cfg, kNtcf)).dump();
  cfg.threads = 4;
  const std::string parallel = to_json(estimate_rates(cfg, kNtcf)).dump();
  const bool reports = serial == again && serial == parallel;
  return {differing == 0 && reports, fmt("%zu transcript pairs, %zu differ; reports identical across reruns and "
                                         "thread counts: %s",
                                         compared, differing, reports ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("criteria", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"honest quiz win probability", c1_win_probability},
      {"round-type frequencies", c2_round_types},
      {"honest comp output and theta uniformity", c3_comp_output},
      {"Hadamard sampler exactness", c4_sampler_exactness},
      {"honest one-sided error", c5_one_sided_error},
      {"complex-conjugate equivalence", c6_conjugate_equivalence},
      {"attack detection gap", c7_detection_gap},
      {"amplification at desk scale", c8_amplification},
      {"linear scaling", c9_linear_scaling},
      {"replay determinism", c10_replay},
  };

  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << "): " << v.detail
              << fmt(" [%.1f s]", secs) << std::endl;
    ++ran;
    if (!v.pass) ++failed;
    if (id == 8) std::cout << "INFO criterion 8 recalibrated: " << c8_recalibrated() << std::endl;
  }
  std::cout << (failed ? fmt("failed: %d of %d", failed, ran) : std::string("all selected criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
