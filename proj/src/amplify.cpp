#include "cvqc/amplify.hpp"

#include <cmath>

#include "cvqc/errors.hpp"

namespace cvqc {

void AmplificationConfig::validate() const {
  require(L >= 1, "amplify: L must be at least 1");
  require(N_temp >= 1, "amplify: N_temp must be at least 1");
  require(N_rspv >= 1, "amplify: N_rspv must be at least 1");
  require(win_slack > 0.0 && win_slack < kOpt, "amplify: win_slack must lie in (0, OPT)");
}

double AmplificationConfig::win_threshold() const {
  return static_cast<double>(N_temp) * kPQuiz * (kOpt - win_slack);
}

AmplificationConfig amplification_config_from_json(const nlohmann::json& j) {
  require(j.is_object(), "amplify config: expected a JSON object");
  AmplificationConfig cfg;
  try {
    cfg.L = j.value("L", cfg.L);
    cfg.kappa = j.value("kappa", cfg.kappa);
    cfg.N_temp = j.value("N_temp", cfg.N_temp);
    cfg.win_slack = j.value("win_slack", cfg.win_slack);
    cfg.N_rspv = j.value("N_rspv", cfg.N_rspv);
    if (j.contains("seed")) cfg.seed = seed_from_hex(j.at("seed").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("amplify config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const AmplificationConfig& cfg) {
  return {{"L", cfg.L},           {"kappa", cfg.kappa},   {"N_temp", cfg.N_temp},
          {"win_slack", cfg.win_slack}, {"N_rspv", cfg.N_rspv}, {"seed", seed_to_hex(cfg.seed)}};
}

TempOutcome run_pre_rspv_temp(const AmplificationConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy,
                              const Seed& seed) {
  cfg.validate();
  TempOutcome out;
  // The pick is independent of every session, so drawing it first lets us
  // keep only the outputs we need.
  Rng pick_rng(derive_seed(seed, "temp.pick", 0));
  out.picked = pick_rng.below(cfg.N_temp);

  SessionConfig sc;
  sc.L = cfg.L;
  sc.kappa = cfg.kappa;
  sc.record_transcript = false;
  sc.overrides = cfg.overrides;

  for (std::size_t j = 0; j < cfg.N_temp; ++j) {
    auto server = strategy();
    Session session(sc, ntcf, *server, derive_seed(seed, "temp.session", j));
    SessionOutcome o = session.run();
    ++out.sessions_run;
    if (o.flag == Flag::Fail) {
      out.flag = Flag::Fail;
      out.reason = "session " + std::to_string(j) + " failed at " + o.fail_step;
      return out;
    }
    if (o.score == Score::Win) ++out.wins;
    if (j == out.picked) {
      out.comp = o.round_type == RoundType::Comp;
      out.outputs = std::move(o.outputs);
    }
  }
  if (static_cast<double>(out.wins) <= cfg.win_threshold()) {
    out.flag = Flag::Fail;
    out.comp = false;
    out.outputs.reset();
    out.reason = "win count " + std::to_string(out.wins) + " at or below threshold";
    return out;
  }
  if (!out.comp) out.outputs.reset();
  return out;
}

RspvOutcome run_rspv(const AmplificationConfig& cfg, const Ntcf& ntcf, const StrategyFactory& strategy) {
  cfg.validate();
  RspvOutcome out;
  for (std::size_t t = 0; t < cfg.N_rspv; ++t) {
    TempOutcome temp = run_pre_rspv_temp(cfg, ntcf, strategy, derive_seed(cfg.seed, "rspv.temp", t));
    ++out.temps_run;
    if (temp.flag == Flag::Fail) {
      out.flag = Flag::Fail;
      out.reason = "temp round " + std::to_string(t) + ": " + temp.reason;
      return out;
    }
    if (temp.comp) {
      out.flag = Flag::Pass;
      out.outputs = std::move(temp.outputs);
      return out;
    }
  }
  out.flag = Flag::Fail;
  out.reason = "no comp round within N_rspv temp rounds";
  return out;
}

bool fidelity_verifier(const SessionOutputs& outputs) {
  return outputs.server.has_value() && outputs.fidelity >= 1.0 - 1e-9;
}

CvqcOutcome run_cvqc(std::size_t circuit_size, AmplificationConfig cfg, const Ntcf& ntcf,
                     const StrategyFactory& strategy, const VerifierPlugin& verifier) {
  require(static_cast<bool>(verifier), "cvqc: verifier required");
  require(circuit_size >= 1, "cvqc: circuit size must be positive");
  cfg.L = circuit_size;
  CvqcOutcome out;
  out.rspv = run_rspv(cfg, ntcf, strategy);
  out.accept = out.rspv.flag == Flag::Pass && out.rspv.outputs && verifier(*out.rspv.outputs);
  return out;
}

double chernoff_bound(double p, double delta, double N) {
  require(p > 0.0 && p < 1.0, "chernoff_bound: p must lie in (0, 1)");
  require(delta >= 0.0, "chernoff_bound: delta must be nonnegative");
  require(N >= 1.0, "chernoff_bound: N must be at least 1");
  return std::exp(-delta * delta * N / 4.0);
}

namespace {

nlohmann::json outputs_json(const SessionOutputs& o) {
  nlohmann::json thetas = nlohmann::json::array();
  for (Z8 t : o.client_thetas) thetas.push_back(t.value());
  nlohmann::json j = {{"client_thetas", thetas}, {"fidelity", o.fidelity}};
  if (o.server) {
    nlohmann::json st = nlohmann::json::array();
    for (Z8 t : o.server->state.thetas) st.push_back(t.value());
    j["server_thetas"] = st;
  }
  return j;
}

}  // namespace

nlohmann::json to_json(const TempOutcome& t) {
  nlohmann::json j = {{"flag", to_string(t.flag)},
                      {"round_type", t.comp ? "comp" : "none"},
                      {"wins", t.wins},
                      {"sessions_run", t.sessions_run},
                      {"picked", t.picked}};
  if (!t.reason.empty()) j["reason"] = t.reason;
  if (t.outputs) j["outputs"] = outputs_json(*t.outputs);
  return j;
}

nlohmann::json to_json(const RspvOutcome& r) {
  nlohmann::json j = {{"flag", to_string(r.flag)}, {"temps_run", r.temps_run}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.outputs) j["outputs"] = outputs_json(*r.outputs);
  return j;
}

}  // namespace cvqc
