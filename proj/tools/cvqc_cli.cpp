#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvqc/amplify.hpp"
#include "cvqc/errors.hpp"
#include "cvqc/harness.hpp"
#include "cvqc/protocol.hpp"
#include "selftest.hpp"

using namespace cvqc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProtocolFail = 1;
constexpr int kExitUsage = 2;

Branch parse_branch(const std::string& name) {
  auto b = branch_from_string(name);
  require(b.has_value(), "unknown branch '" + name + "'");
  return *b;
}

int cmd_run(std::size_t L, std::size_t kappa, const std::string& seed, const std::string& strategy,
            const std::string& branch, int delta) {
  SessionConfig sc;
  sc.L = L;
  sc.kappa = kappa;
  if (!branch.empty()) sc.overrides.branch = parse_branch(branch);
  if (delta >= 0) sc.overrides.delta = delta;
  const HiddenShiftNtcf ntcf;
  auto server = parse_strategy(strategy)();
  const SessionResult r = run_pre_rspv(sc, ntcf, *server, seed_from_hex(seed));
  std::cout << r.transcript.to_jsonl();
  std::cerr << to_json(r.outcome).dump() << '\n';
  return kExitOk;
}

int cmd_stats(ExperimentConfig cfg, const std::string& seed, const std::string& branch, bool timing, bool table) {
  cfg.seed = seed_from_hex(seed);
  if (!branch.empty()) cfg.overrides.branch = parse_branch(branch);
  parse_strategy(cfg.strategy);  // reject bad names before running anything
  const HiddenShiftNtcf ntcf;
  const ExperimentReport r = estimate_rates(cfg, ntcf);
  std::cout << to_json(r, timing).dump(2) << '\n';
  if (table) {
    auto row = [](const char* name, const RateEstimate& e) {
      std::cerr << "  " << name << ": " << e.rate << "  [" << e.lo << ", " << e.hi << "]  (" << e.successes << "/"
                << e.trials << ")\n";
    };
    std::cerr << "sessions " << cfg.sessions << ", strategy " << cfg.strategy << "\n";
    for (const auto& [t, n] : r.round_type_counts) std::cerr << "  " << t << ": " << n << "\n";
    row("pass", r.pass_rate);
    row("win | quiz", r.win_rate_quiz);
    row("win", r.win_rate_unconditional);
    std::cerr << "  mean comp fidelity: " << r.mean_comp_fidelity << "\n";
  }
  return kExitOk;
}

int cmd_amplify(AmplificationConfig cfg, const std::string& config_path, const std::string& seed,
                const std::string& strategy, const std::string& mode) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    require(in.good(), "cannot read config file '" + config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ContractError(std::string("config file: ") + e.what());
    }
    cfg = amplification_config_from_json(j);
  } else {
    cfg.seed = seed_from_hex(seed);
    cfg.validate();
  }
  const auto factory = parse_strategy(strategy);
  const HiddenShiftNtcf ntcf;
  nlohmann::json out = {{"config", to_json(cfg)}, {"strategy", strategy}, {"mode", mode}};
  bool ok = false;
  if (mode == "temp") {
    const TempOutcome t = run_pre_rspv_temp(cfg, ntcf, factory, cfg.seed);
    out["result"] = to_json(t);
    ok = t.flag == Flag::Pass;
  } else if (mode == "rspv") {
    const RspvOutcome r = run_rspv(cfg, ntcf, factory);
    out["result"] = to_json(r);
    ok = r.flag == Flag::Pass;
  } else {
    const CvqcOutcome c = run_cvqc(cfg.L, cfg, ntcf, factory, fidelity_verifier);
    out["result"] = to_json(c.rspv);
    out["accept"] = c.accept;
    ok = c.accept;
  }
  std::cout << out.dump(2) << '\n';
  return ok ? kExitOk : kExitProtocolFail;
}

int cmd_bench(std::size_t kappa, const std::vector<std::size_t>& grid, std::size_t sessions, const std::string& seed) {
  const auto points = scaling_bench(kappa, grid, sessions, seed_from_hex(seed));
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({{"L", p.L}, {"mean_seconds", p.mean_seconds}});
  nlohmann::json out = {{"kappa", kappa},
                        {"sessions_per_L", sessions},
                        {"points", pts},
                        {"local_slopes", local_slopes(points)},
                        {"slope_ratios", slope_ratios(points)}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for classical verification of quantum computation"};
  app.require_subcommand(1);

  std::size_t L = 2, kappa = 8;
  std::string seed = "00", strategy = "honest", branch;
  int delta = -1;
  auto* run = app.add_subcommand("run", "Run one pre-RSPV session and print its transcript as JSON lines");
  run->add_option("--L", L, "Output gadgets")->check(CLI::PositiveNumber);
  run->add_option("--kappa", kappa, "Security parameter")->check(CLI::Range(2, 64));
  run->add_option("--seed", seed, "Hex seed");
  run->add_option("--strategy", strategy, "Strategy name or JSON spec");
  run->add_option("--branch", branch, "Force a branch (StdBTestAll, StdBTest, CoPhTest, InPhTest, BNTest, Output)");
  run->add_option("--delta", delta, "Force the InPhTest bias")->check(CLI::IsMember({0, 4, 1}));

  ExperimentConfig ecfg;
  bool timing = false, table = false;
  std::string stats_seed = "00", stats_branch;
  auto* stats = app.add_subcommand("stats", "Estimate pass/win rates over many sessions");
  stats->add_option("--L", ecfg.L)->check(CLI::PositiveNumber);
  stats->add_option("--kappa", ecfg.kappa)->check(CLI::Range(2, 64));
  stats->add_option("--sessions", ecfg.sessions)->check(CLI::PositiveNumber);
  stats->add_option("--strategy", ecfg.strategy);
  stats->add_option("--seed", stats_seed);
  stats->add_option("--threads", ecfg.threads, "Worker threads, 0 = all cores");
  stats->add_option("--branch", stats_branch);
  stats->add_flag("--timing", timing, "Include wall-clock per session");
  stats->add_flag("--table", table, "Human-readable summary on stderr");

  AmplificationConfig acfg;
  std::string config_path, amp_seed = "00", amp_strategy = "honest", mode = "rspv";
  auto* amp = app.add_subcommand("amplify", "Run preRSPVTemp, RSPV or CVQC; exit 1 if the client rejects");
  amp->add_option("--config", config_path, "JSON config file");
  amp->add_option("--L", acfg.L)->check(CLI::PositiveNumber);
  amp->add_option("--kappa", acfg.kappa)->check(CLI::Range(2, 64));
  amp->add_option("--N-temp", acfg.N_temp)->check(CLI::PositiveNumber);
  amp->add_option("--win-slack", acfg.win_slack);
  amp->add_option("--N-rspv", acfg.N_rspv)->check(CLI::PositiveNumber);
  amp->add_option("--seed", amp_seed);
  amp->add_option("--strategy", amp_strategy);
  amp->add_option("--mode", mode)->check(CLI::IsMember({"temp", "rspv", "cvqc"}));

  std::size_t bench_kappa = 16, bench_sessions = 5;
  std::vector<std::size_t> grid{128, 256, 512, 1024};
  std::string bench_seed = "00";
  auto* bench = app.add_subcommand("bench", "Time honest output-branch sessions over a grid of L");
  bench->add_option("--kappa", bench_kappa)->check(CLI::Range(2, 64));
  bench->add_option("--L-grid", grid)->delimiter(',');
  bench->add_option("--sessions", bench_sessions)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed);

  auto* selftest = app.add_subcommand("selftest", "Brute-force cross-checks of samplers and primitives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(L, kappa, seed, strategy, branch, delta);
    if (*stats) return cmd_stats(ecfg, stats_seed, stats_branch, timing, table);
    if (*amp) return cmd_amplify(acfg, config_path, amp_seed, amp_strategy, mode);
    if (*bench) return cmd_bench(bench_kappa, grid, bench_sessions, bench_seed);
    if (*selftest) return run_selftest(std::cout) == 0 ? kExitOk : kExitProtocolFail;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProtocolFail;
  }
  return kExitUsage;
}
