#include "cvqc/protocol.hpp"

#include <algorithm>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {

constexpr int kDeltas[3] = {0, 4, 1};

std::string idx(std::string_view prefix, std::size_t i) { return std::string(prefix) + "." + std::to_string(i); }

nlohmann::json hex_list(std::span<const BitString> items) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : items) out.push_back(b.to_hex());
  return out;
}

nlohmann::json key_json(const KeyPair& k) { return {k.x0.to_hex(), k.x1.to_hex()}; }

}  // namespace

const char* to_string(RoundType t) {
  switch (t) {
    case RoundType::Test: return "test";
    case RoundType::Quiz: return "quiz";
    case RoundType::Comp: return "comp";
  }
  return "?";
}

const char* to_string(Flag f) { return f == Flag::Pass ? "pass" : "fail"; }

const char* to_string(Score s) {
  switch (s) {
    case Score::None: return "none";
    case Score::Win: return "win";
    case Score::Lose: return "lose";
  }
  return "?";
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::StdBTestAll: return "StdBTestAll";
    case Branch::StdBTest: return "StdBTest";
    case Branch::CoPhTest: return "CoPhTest";
    case Branch::InPhTest: return "InPhTest";
    case Branch::BNTest: return "BNTest";
    case Branch::Output: return "Output";
  }
  return "?";
}

std::optional<Branch> branch_from_string(std::string_view name) {
  for (Branch b : {Branch::StdBTestAll, Branch::StdBTest, Branch::CoPhTest, Branch::InPhTest, Branch::BNTest,
                   Branch::Output})
    if (name == to_string(b)) return b;
  return std::nullopt;
}

RoundType round_type_of(Branch b) {
  switch (b) {
    case Branch::InPhTest: return RoundType::Quiz;
    case Branch::Output: return RoundType::Comp;
    default: return RoundType::Test;
  }
}

RoundPlan sample_plan(std::size_t L, Rng& rng, const PlanOverride& ov) {
  static constexpr Branch kSub[5] = {Branch::StdBTest, Branch::CoPhTest, Branch::InPhTest, Branch::BNTest,
                                     Branch::Output};
  RoundPlan plan;
  const bool prepare = rng.coin();
  const auto sub = rng.below(5);
  plan.branch = prepare ? kSub[sub] : Branch::StdBTestAll;
  plan.delta = kDeltas[rng.below(3)];
  plan.hadamard_branch = rng.coin();
  plan.subset.assign(L, false);
  bool any = false;
  while (!any && L > 0) {
    for (std::size_t i = 0; i < L; ++i) {
      plan.subset[i] = rng.coin();
      any = any || plan.subset[i];
    }
  }

  if (ov.branch) plan.branch = *ov.branch;
  if (ov.delta) {
    require(*ov.delta == 0 || *ov.delta == 4 || *ov.delta == 1, "plan override: delta must be 0, 4 or 1");
    plan.delta = *ov.delta;
  }
  if (ov.hadamard_branch) plan.hadamard_branch = *ov.hadamard_branch;
  if (ov.subset) {
    require(ov.subset->size() == L, "plan override: subset must have L entries");
    require(std::find(ov.subset->begin(), ov.subset->end(), true) != ov.subset->end(),
            "plan override: subset must be nonempty");
    plan.subset = *ov.subset;
  }
  return plan;
}

Session::Session(const SessionConfig& config, const Ntcf& ntcf, Strategy& strategy, const Seed& seed)
    : config_(config),
      ntcf_(ntcf),
      strategy_(strategy),
      oracle_(derive_seed(seed, "oracle", 0)),
      client_rng_(derive_seed(seed, "client", 0)),
      server_rng_(derive_seed(seed, "server", 0)),
      transcript_(config.record_transcript) {
  require(config.L >= 1, "session: L must be at least 1");
  require(config.kappa >= 2, "session: kappa must be at least 2");
  plan_ = sample_plan(config.L, client_rng_, config.overrides);
}

ServerView Session::view(std::string_view context) {
  return ServerView{transcript_, oracle_, server_rng_, config_.kappa, context,
                    config_.probe ? &probes_ : nullptr};
}

Gadget& Session::take(std::size_t slot) {
  require(slot < held_.size(), "session: no such gadget");
  if (consumed_[slot]) throw ContractError("session: gadget " + std::to_string(slot) + " was already measured");
  return held_[slot];
}

Flag Session::fail(std::string step) {
  if (fail_step_.empty()) fail_step_ = std::move(step);
  return Flag::Fail;
}

bool Session::check_member(const KeyPair& K, const BitString& reported) const { return K.contains(reported); }

Flag Session::run_setup() {
  const std::size_t slots = config_.L + 2;
  std::vector<NtcfPublicKey> pks;
  pks.reserve(slots);
  secrets_.trapdoors.clear();
  for (std::size_t s = 0; s < slots; ++s) {
    auto km = ntcf_.keygen(config_.kappa, client_rng_);
    transcript_.record(Sender::Client, idx("setup.pk", s), [&] { return to_json(km.pk); });
    pks.push_back(std::move(km.pk));
    secrets_.trapdoors.push_back(std::move(km.sk));
  }

  held_.assign(slots, Gadget{});
  consumed_.assign(slots, false);
  std::vector<KeyPair> keys(slots);
  bool ok = true;
  for (std::size_t s = 0; s < slots; ++s) {
    auto v = view("setup");
    const BitString y = strategy_.on_setup(v, ntcf_, pks[s], held_[s]);
    transcript_.record(Sender::Server, idx("setup.y", s), [&] { return nlohmann::json(y.to_hex()); });
    if (!ok) continue;
    auto x0 = ntcf_.dec(secrets_.trapdoors[s], 0, y);
    auto x1 = ntcf_.dec(secrets_.trapdoors[s], 1, y);
    if (!x0 || !x1 || *x0 == *x1) {
      ok = false;
      fail(idx("setup.y", s));
      continue;
    }
    keys[s] = {std::move(*x0), std::move(*x1)};
  }
  if (!ok) return Flag::Fail;

  secrets_.helper = keys[0];
  secrets_.keys.assign(keys.begin() + 1, keys.end());
  secrets_.thetas.resize(config_.L + 1);
  for (auto& t : secrets_.thetas) {
    const Z8 t0 = static_cast<int>(client_rng_.below(8));
    const Z8 t1 = static_cast<int>(client_rng_.below(8));
    t = {t0, t1};
  }
  return Flag::Pass;
}

Flag Session::run_stdb_test(std::string_view label) {
  std::vector<BitString> reported;
  std::vector<std::size_t> slots;
  for (std::size_t s = 0; s < held_.size(); ++s) {
    if (consumed_[s]) continue;
    auto v = view(label);
    reported.push_back(strategy_.on_std_measure(v, take(s)));
    consumed_[s] = true;
    slots.push_back(s);
  }
  transcript_.record(Sender::Server, std::string(label) + ".response", [&] { return hex_list(reported); });
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const KeyPair& K = slots[k] == 0 ? secrets_.helper : secrets_.keys[slots[k] - 1];
    if (!check_member(K, reported[k])) return fail(std::string(label) + ".response");
  }
  return Flag::Pass;
}

Flag Session::run_add_phase() {
  const std::size_t n = config_.L + 1;
  std::vector<LookupTable> tables;
  tables.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    tables.push_back(make_phase_table(secrets_.helper, secrets_.keys[i], secrets_.thetas[i], config_.kappa, oracle_,
                                      client_rng_));
    transcript_.record(Sender::Client, idx("AddPhase.table", i), [&] { return to_json(tables.back()); });
  }
  const Gadget& helper = take(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = view("AddPhase");
    strategy_.on_table_received(v, take(i + 1), helper, tables[i]);
  }
  return run_hadamard_test(secrets_.helper, std::nullopt, std::nullopt, 0, "AddPhase.hadamard").flag;
}

Session::HadamardResult Session::run_hadamard_test(const KeyPair& K, std::optional<PhasePair> theta,
                                                   std::optional<int> delta, std::size_t slot,
                                                   std::string_view label) {
  const std::string base(label);
  const std::string context = base.substr(0, base.find('.'));
  HadamardResult res;
  Gadget& g = take(slot);
  const int bias = delta.value_or(0);

  if (theta) {
    const Z8 revealed = theta->relative() - Z8(bias);
    transcript_.record(Sender::Client, base + ".reveal", [&] { return nlohmann::json(revealed.value()); });
    auto v = view(context);
    strategy_.on_dephase(v, g, revealed);
  }

  const BitString pad = fresh_pad(client_rng_, config_.kappa);
  transcript_.record(Sender::Client, base + ".pad", [&] { return nlohmann::json(pad.to_hex()); });
  auto v = view(context);
  res.d = strategy_.on_hadamard_measure(v, g, pad);
  consumed_[slot] = true;
  transcript_.record(Sender::Server, base + ".d", [&] { return nlohmann::json(res.d.to_hex()); });

  const std::size_t n = K.x0.size() + config_.kappa;
  if (res.d.size() != n || res.d.suffix(config_.kappa).none()) {
    res.flag = fail(base + ".d");
    return res;
  }
  const BitString w0 = K.x0 + oracle_.query(pad + K.x0, config_.kappa);
  const BitString w1 = K.x1 + oracle_.query(pad + K.x1, config_.kappa);
  const bool parity = res.d.dot(w0) != res.d.dot(w1);

  switch (bias) {
    case 0:
      if (parity) res.flag = fail(base + ".d");
      break;
    case 4:
      if (!parity) res.flag = fail(base + ".d");
      break;
    case 1:
      res.score = parity ? Score::Lose : Score::Win;
      break;
    default:
      throw ContractError("hadamard test: delta must be 0, 4 or 1");
  }
  return res;
}

Flag Session::run_coph_test(bool hadamard_branch) {
  const std::size_t L = config_.L;
  std::vector<LookupTable> tables;
  std::vector<std::pair<BitString, BitString>> rs;
  tables.reserve(L);
  rs.reserve(L);
  for (std::size_t i = 1; i <= L; ++i) {
    BitString r0 = client_rng_.bits(config_.kappa), r1 = client_rng_.bits(config_.kappa);
    while (r1 == r0) r1 = client_rng_.bits(config_.kappa);
    tables.push_back(make_combine_table(secrets_.keys[0], secrets_.keys[i], r0, r1, config_.kappa, oracle_,
                                        client_rng_));
    rs.emplace_back(std::move(r0), std::move(r1));
    transcript_.record(Sender::Client, idx("CoPhTest.table", i), [&] { return to_json(tables.back()); });
  }

  KeyPair Kc = secrets_.keys[0];
  PhasePair Tc = secrets_.thetas[0];
  for (std::size_t i = 1; i <= L; ++i) {
    auto v = view("CoPhTest");
    Gadget& acc = take(1);
    const BitString r = strategy_.on_combine_measure(v, acc, take(i + 1), tables[i - 1]);
    consumed_[i + 1] = true;
    transcript_.record(Sender::Server, idx("CoPhTest.r", i), [&] { return nlohmann::json(r.to_hex()); });
    const KeyPair& Ki = secrets_.keys[i];
    const PhasePair& Ti = secrets_.thetas[i];
    if (r == rs[i - 1].first) {
      Kc = {Kc.x0 + Ki.x0, Kc.x1 + Ki.x1};
      Tc = {Tc.t0 + Ti.t0, Tc.t1 + Ti.t1};
    } else if (r == rs[i - 1].second) {
      Kc = {Kc.x0 + Ki.x1, Kc.x1 + Ki.x0};
      Tc = {Tc.t0 + Ti.t1, Tc.t1 + Ti.t0};
    } else {
      return fail(idx("CoPhTest.r", i));
    }
  }

  if (hadamard_branch) return run_hadamard_test(Kc, Tc, std::nullopt, 1, "CoPhTest.hadamard").flag;
  auto v = view("CoPhTest");
  const BitString reported = strategy_.on_std_measure(v, take(1));
  consumed_[1] = true;
  transcript_.record(Sender::Server, "CoPhTest.std", [&] { return nlohmann::json(reported.to_hex()); });
  return check_member(Kc, reported) ? Flag::Pass : fail("CoPhTest.std");
}

Session::HadamardResult Session::run_inph_test(int delta) {
  return run_hadamard_test(secrets_.keys[0], secrets_.thetas[0], delta, 1, "InPhTest.hadamard");
}

Flag Session::run_bn_test(const std::vector<bool>& subset, bool hadamard_branch) {
  const std::size_t L = config_.L;
  require(subset.size() == L, "BNTest: subset must have L entries");

  transcript_.record(Sender::Client, "BNTest.reveal", [&] {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 1; i <= L; ++i) j.push_back({secrets_.thetas[i].t0.value(), secrets_.thetas[i].t1.value()});
    return j;
  });
  for (std::size_t i = 1; i <= L; ++i) {
    auto v = view("BNTest");
    strategy_.on_dephase(v, take(i + 1), secrets_.thetas[i].relative());
  }

  std::vector<std::size_t> in, out;
  for (std::size_t i = 1; i <= L; ++i) (subset[i - 1] ? in : out).push_back(i);
  require(!in.empty(), "BNTest: subset must be nonempty");
  transcript_.record(Sender::Client, "BNTest.subset", [&] { return nlohmann::json(in); });

  const std::size_t first = in.front();
  std::vector<LookupTable> tables;
  std::vector<std::pair<BitString, BitString>> rs;
  for (std::size_t k = 1; k < in.size(); ++k) {
    BitString r0 = client_rng_.bits(config_.kappa), r1 = client_rng_.bits(config_.kappa);
    while (r1 == r0) r1 = client_rng_.bits(config_.kappa);
    tables.push_back(make_combine_table(secrets_.keys[first], secrets_.keys[in[k]], r0, r1, config_.kappa, oracle_,
                                        client_rng_));
    rs.emplace_back(std::move(r0), std::move(r1));
    transcript_.record(Sender::Client, idx("BNTest.table", in[k]), [&] { return to_json(tables.back()); });
  }

  KeyPair Kc = secrets_.keys[first];
  for (std::size_t k = 1; k < in.size(); ++k) {
    const std::size_t i = in[k];
    auto v = view("BNTest");
    const BitString r = strategy_.on_combine_measure(v, take(first + 1), take(i + 1), tables[k - 1]);
    consumed_[i + 1] = true;
    transcript_.record(Sender::Server, idx("BNTest.r", i), [&] { return nlohmann::json(r.to_hex()); });
    const KeyPair& Ki = secrets_.keys[i];
    if (r == rs[k - 1].first)
      Kc = {Kc.x0 + Ki.x0, Kc.x1 + Ki.x1};
    else if (r == rs[k - 1].second)
      Kc = {Kc.x0 + Ki.x1, Kc.x1 + Ki.x0};
    else
      return fail(idx("BNTest.r", i));
  }

  std::vector<BitString> reported;
  for (std::size_t i : out) {
    auto v = view("BNTest");
    reported.push_back(strategy_.on_std_measure(v, take(i + 1)));
    consumed_[i + 1] = true;
  }
  if (!out.empty())
    transcript_.record(Sender::Server, "BNTest.complement", [&] { return hex_list(reported); });
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!check_member(secrets_.keys[out[k]], reported[k])) return fail("BNTest.complement");

  if (hadamard_branch) return run_hadamard_test(Kc, std::nullopt, std::nullopt, first + 1, "BNTest.hadamard").flag;
  auto v = view("BNTest");
  const BitString last = strategy_.on_std_measure(v, take(first + 1));
  consumed_[first + 1] = true;
  transcript_.record(Sender::Server, "BNTest.std", [&] { return nlohmann::json(last.to_hex()); });
  return check_member(Kc, last) ? Flag::Pass : fail("BNTest.std");
}

SessionOutputs Session::run_output() {
  const std::size_t L = config_.L;
  std::vector<KeyPair> revealed(secrets_.keys.begin() + 1, secrets_.keys.end());
  transcript_.record(Sender::Client, "Output.keys", [&] {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& k : revealed) j.push_back(key_json(k));
    return j;
  });

  SessionOutputs out;
  out.client_thetas.reserve(L);
  for (std::size_t i = 1; i <= L; ++i) out.client_thetas.push_back(secrets_.thetas[i].relative());

  for (std::size_t i = 1; i <= L; ++i) take(i + 1);
  std::span<const Gadget> gadgets(held_.data() + 2, L);
  auto v = view("Output");
  try {
    out.server = strategy_.on_decode_output(v, gadgets, revealed);
    out.fidelity = fidelity_ideal(out.server->state, out.client_thetas);
  } catch (const NonHonestForm&) {
    out.server.reset();
  } catch (const ContractError&) {
    out.server.reset();
  }
  for (std::size_t i = 1; i <= L; ++i) consumed_[i + 1] = true;
  return out;
}

SessionOutcome Session::run() {
  SessionOutcome outcome;
  outcome.plan = plan_;
  outcome.round_type = round_type_of(plan_.branch);

  outcome.flag = run_setup();
  if (outcome.flag == Flag::Pass) {
    if (plan_.branch == Branch::StdBTestAll) {
      outcome.flag = run_stdb_test("StdBTestAll");
    } else {
      outcome.flag = run_add_phase();
      if (outcome.flag == Flag::Pass) {
        switch (plan_.branch) {
          case Branch::StdBTest:
            outcome.flag = run_stdb_test("StdBTest");
            break;
          case Branch::CoPhTest:
            outcome.flag = run_coph_test(plan_.hadamard_branch);
            break;
          case Branch::InPhTest: {
            const auto r = run_inph_test(plan_.delta);
            outcome.flag = r.flag;
            outcome.score = r.score;
            break;
          }
          case Branch::BNTest:
            outcome.flag = run_bn_test(plan_.subset, plan_.hadamard_branch);
            break;
          case Branch::Output:
            outcome.outputs = run_output();
            break;
          case Branch::StdBTestAll:
            break;
        }
      }
    }
  }
  outcome.fail_step = fail_step_;
  outcome.measurement_probs = probes_;
  return outcome;
}

SessionResult run_pre_rspv(const SessionConfig& config, const Ntcf& ntcf, Strategy& strategy, const Seed& seed) {
  Session session(config, ntcf, strategy, seed);
  SessionOutcome outcome = session.run();
  return {std::move(outcome), std::move(session.transcript())};
}

nlohmann::json to_json(const SessionOutcome& o) {
  nlohmann::json j = {{"round_type", to_string(o.round_type)},
                      {"flag", to_string(o.flag)},
                      {"score", to_string(o.score)},
                      {"branch", to_string(o.plan.branch)}};
  if (!o.fail_step.empty()) j["fail_step"] = o.fail_step;
  if (o.plan.branch == Branch::InPhTest) j["delta"] = o.plan.delta;
  if (o.outputs) {
    nlohmann::json thetas = nlohmann::json::array();
    for (Z8 t : o.outputs->client_thetas) thetas.push_back(t.value());
    j["client_thetas"] = thetas;
    if (o.outputs->server) {
      nlohmann::json st = nlohmann::json::array();
      for (Z8 t : o.outputs->server->state.thetas) st.push_back(t.value());
      j["server_thetas"] = st;
    }
    j["fidelity"] = o.outputs->fidelity;
  }
  return j;
}

}  // namespace cvqc
