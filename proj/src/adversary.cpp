#include "cvqc/adversary.hpp"

#include <charconv>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {

std::vector<Gadget> conjugate_all(std::span<const Gadget> gadgets) {
  std::vector<Gadget> out;
  out.reserve(gadgets.size());
  for (const auto& g : gadgets) out.push_back(conjugate(g));
  return out;
}

int parse_int(std::string_view s, std::string_view spec) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size(), "phase map: bad integer in '" + std::string(spec) + "'");
  return v;
}

}  // namespace

ConjugateStrategy::ConjugateStrategy(std::unique_ptr<Strategy> inner) : inner_(std::move(inner)) {
  require(inner_ != nullptr, "conjugate: inner strategy required");
}

BitString ConjugateStrategy::on_setup(ServerView& view, const Ntcf& ntcf, const NtcfPublicKey& pk, Gadget& out) {
  BitString y = inner_->on_setup(view, ntcf, pk, out);
  out = conjugate(out);
  return y;
}

void ConjugateStrategy::on_table_received(ServerView& view, Gadget& target, const Gadget& helper,
                                          const LookupTable& table) {
  Gadget s = conjugate(target);
  inner_->on_table_received(view, s, conjugate(helper), table);
  target = conjugate(s);
}

void ConjugateStrategy::on_dephase(ServerView& view, Gadget& g, Z8 revealed) {
  Gadget s = conjugate(g);
  inner_->on_dephase(view, s, revealed);
  g = conjugate(s);
}

BitString ConjugateStrategy::on_std_measure(ServerView& view, Gadget& g) {
  Gadget s = conjugate(g);
  BitString key = inner_->on_std_measure(view, s);
  g = conjugate(s);
  return key;
}

BitString ConjugateStrategy::on_combine_measure(ServerView& view, Gadget& acc, Gadget& next,
                                                const LookupTable& table) {
  Gadget sa = conjugate(acc), sb = conjugate(next);
  BitString r = inner_->on_combine_measure(view, sa, sb, table);
  acc = conjugate(sa);
  next = conjugate(sb);
  return r;
}

BitString ConjugateStrategy::on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) {
  Gadget s = conjugate(g);
  BitString d = inner_->on_hadamard_measure(view, s, pad);
  g = conjugate(s);
  return d;
}

DecodedOutput ConjugateStrategy::on_decode_output(ServerView& view, std::span<const Gadget> gadgets,
                                                  std::span<const KeyPair> revealed) {
  const auto flipped = conjugate_all(gadgets);
  DecodedOutput out = inner_->on_decode_output(view, flipped, revealed);
  for (auto& t : out.state.thetas) t = -t;
  out.global_phase = std::conj(out.global_phase);
  return apply_x_all(std::move(out));
}

PhaseMap::PhaseMap() : spec_("identity") {
  for (int t = 0; t < 8; ++t) values_[t] = t;
}

PhaseMap::PhaseMap(std::array<Z8, 8> values, std::string spec) : values_(values), spec_(std::move(spec)) {}

PhaseMap PhaseMap::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  std::array<Z8, 8> v;
  const std::string name(spec);

  if (head == "identity" && arg.empty()) {
    for (int t = 0; t < 8; ++t) v[t] = t;
  } else if (head == "negate" && arg.empty()) {
    for (int t = 0; t < 8; ++t) v[t] = -t;
  } else if (head == "shift") {
    const int k = parse_int(arg, spec);
    for (int t = 0; t < 8; ++t) v[t] = t + k;
  } else if (head == "const") {
    const int k = parse_int(arg, spec);
    for (int t = 0; t < 8; ++t) v[t] = k;
  } else if (head == "bump") {
    const int k = ((parse_int(arg, spec) % 8) + 8) % 8;
    for (int t = 0; t < 8; ++t) v[t] = t + (t == k ? 1 : 0);
  } else if (head == "table") {
    std::size_t pos = 0;
    for (int t = 0; t < 8; ++t) {
      const auto comma = arg.find(',', pos);
      const bool last = t == 7;
      require(last ? comma == std::string_view::npos : comma != std::string_view::npos,
              "phase map: table needs exactly 8 entries in '" + name + "'");
      v[t] = parse_int(arg.substr(pos, last ? std::string_view::npos : comma - pos), spec);
      pos = comma + 1;
    }
  } else {
    throw ContractError("phase map: unknown spec '" + name + "'");
  }
  return PhaseMap(v, name);
}

void PhaseOffsetStrategy::on_table_received(ServerView& view, Gadget& target, const Gadget& helper,
                                            const LookupTable& table) {
  const PhasePair p = decrypt_branch_phases(target, table, helper.keys.x0, view.oracle);
  target = apply_phases(target, {f_(p.t0), g_(p.t1)});
}

BitString RandomResponseStrategy::on_std_measure(ServerView& view, Gadget& g) {
  return view.rng.bits(g.keys.x0.size());
}

BitString RandomResponseStrategy::on_combine_measure(ServerView& view, Gadget&, Gadget&, const LookupTable&) {
  return view.rng.bits(view.kappa);
}

BitString RandomResponseStrategy::on_hadamard_measure(ServerView& view, Gadget& g, const BitString&) {
  return view.rng.bits(g.keys.x0.size() + view.kappa);
}

DecodedOutput RandomResponseStrategy::on_decode_output(ServerView& view, std::span<const Gadget> gadgets,
                                                       std::span<const KeyPair>) {
  DecodedOutput out;
  for (std::size_t i = 0; i < gadgets.size(); ++i) out.state.thetas.push_back(static_cast<int>(view.rng.below(8)));
  return out;
}

void GhzCollapseStrategy::on_dephase(ServerView& view, Gadget& g, Z8 revealed) {
  Strategy::on_dephase(view, g, revealed);
  if (view.context == "BNTest") active_ = true;
}

BitString GhzCollapseStrategy::on_std_measure(ServerView& view, Gadget& g) {
  if (!active(view)) return Strategy::on_std_measure(view, g);
  if (!collapsed_) {
    collapsed_ = view.rng.coin() ? 1 : 0;
    if (view.probe) view.probe->push_back(0.5);
  }
  return g.keys[*collapsed_];
}

BitString GhzCollapseStrategy::on_combine_measure(ServerView& view, Gadget& acc, Gadget& next,
                                                  const LookupTable& table) {
  if (!active(view)) return Strategy::on_combine_measure(view, acc, next, table);
  // Branches are perfectly correlated, so only aligned pairs carry weight.
  const RowMatch m = decrypt_row(table, acc.keys.x0.prefix(next.keys.x0.size()) + next.keys.x0, view.oracle);
  if (!m.ok()) throw TableMismatch("ghz_collapse: combine table does not open");
  acc.keys = {acc.keys.x0 + next.keys.x0, acc.keys.x1 + next.keys.x1};
  if (view.probe) view.probe->push_back(1.0);
  return m.plaintext;
}

BitString GhzCollapseStrategy::on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) {
  if (!active(view) || !collapsed_) return Strategy::on_hadamard_measure(view, g, pad);
  Gadget c = g;
  c.amp0 = *collapsed_ ? 0.0 : 1.0;
  c.amp1 = *collapsed_ ? 1.0 : 0.0;
  return Strategy::on_hadamard_measure(view, c, pad);
}

StrategyFactory make_strategy_factory(const nlohmann::json& spec) {
  require(spec.is_object() && spec.contains("attack") && spec["attack"].is_string(),
          "strategy: expected an object with an \"attack\" name");
  const std::string name = spec["attack"];
  if (name == "honest") return [] { return std::make_unique<HonestStrategy>(); };
  if (name == "conjugate" || name == "conjugate_attack") {
    StrategyFactory inner = spec.contains("inner") ? make_strategy_factory(spec["inner"])
                                                   : StrategyFactory([] { return std::make_unique<HonestStrategy>(); });
    return [inner] { return std::make_unique<ConjugateStrategy>(inner()); };
  }
  if (name == "phase_offset") {
    const PhaseMap f = PhaseMap::parse(spec.value("f", std::string("identity")));
    const PhaseMap g = PhaseMap::parse(spec.value("g", std::string("identity")));
    return [f, g] { return std::make_unique<PhaseOffsetStrategy>(f, g); };
  }
  if (name == "random_response" || name == "always_lose")
    return [] { return std::make_unique<RandomResponseStrategy>(); };
  if (name == "ghz_collapse") return [] { return std::make_unique<GhzCollapseStrategy>(); };
  throw ContractError("strategy: unknown attack '" + name + "'");
}

StrategyFactory parse_strategy(std::string_view text) {
  if (!text.empty() && text.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ContractError(std::string("strategy: invalid JSON: ") + e.what());
    }
    return make_strategy_factory(j);
  }
  return make_strategy_factory(nlohmann::json{{"attack", std::string(text)}});
}

std::vector<std::string> strategy_names() {
  return {"honest", "conjugate", "phase_offset", "random_response", "always_lose", "ghz_collapse"};
}

}  // namespace cvqc
