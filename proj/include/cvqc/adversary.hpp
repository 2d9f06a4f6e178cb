#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvqc/strategy.hpp"

namespace cvqc {

class HonestStrategy final : public Strategy {};

/// Runs `inner` on the complex conjugate of everything the server holds. The
/// server's actual state is the conjugate of the inner strategy's state at all
/// times; at output it decodes and applies X to every qubit.
class ConjugateStrategy final : public Strategy {
 public:
  explicit ConjugateStrategy(std::unique_ptr<Strategy> inner);

  BitString on_setup(ServerView& view, const Ntcf& ntcf, const NtcfPublicKey& pk, Gadget& out) override;
  void on_table_received(ServerView& view, Gadget& target, const Gadget& helper, const LookupTable& table) override;
  void on_dephase(ServerView& view, Gadget& g, Z8 revealed) override;
  BitString on_std_measure(ServerView& view, Gadget& g) override;
  BitString on_combine_measure(ServerView& view, Gadget& acc, Gadget& next, const LookupTable& table) override;
  BitString on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) override;
  DecodedOutput on_decode_output(ServerView& view, std::span<const Gadget> gadgets,
                                 std::span<const KeyPair> revealed) override;

 private:
  std::unique_ptr<Strategy> inner_;
};

/// A total map Z8 -> Z8. Specs: identity, negate, shift:k, const:k,
/// bump:k (adds 1 at θ = k only), table:v0,v1,...,v7.
class PhaseMap {
 public:
  PhaseMap();
  explicit PhaseMap(std::array<Z8, 8> values, std::string spec);
  static PhaseMap parse(std::string_view spec);
  Z8 operator()(Z8 theta) const { return values_[theta.value()]; }
  const std::string& spec() const { return spec_; }

 private:
  std::array<Z8, 8> values_;
  std::string spec_;
};

/// Decrypts phase tables honestly, then kicks back f(θ0) on branch 0 and
/// g(θ1) on branch 1 instead of θ0, θ1.
class PhaseOffsetStrategy final : public Strategy {
 public:
  PhaseOffsetStrategy(PhaseMap f, PhaseMap g) : f_(std::move(f)), g_(std::move(g)) {}
  void on_table_received(ServerView& view, Gadget& target, const Gadget& helper, const LookupTable& table) override;

 private:
  PhaseMap f_;
  PhaseMap g_;
};

/// Honest setup and phase handling; uniform random bit strings of the right
/// length at every measurement and a random θ-vector at output.
class RandomResponseStrategy final : public Strategy {
 public:
  BitString on_std_measure(ServerView& view, Gadget& g) override;
  BitString on_combine_measure(ServerView& view, Gadget& acc, Gadget& next, const LookupTable& table) override;
  BitString on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) override;
  DecodedOutput on_decode_output(ServerView& view, std::span<const Gadget> gadgets,
                                 std::span<const KeyPair> revealed) override;
};

/// Inside BNTest, replaces the product of dephased gadgets by the two-branch
/// state (|x0^(1)...x0^(L)> + |x1^(1)...x1^(L)>)/√2. Combines then always
/// return r0, and any standard-basis measurement collapses every gadget.
/// Honest elsewhere.
class GhzCollapseStrategy final : public Strategy {
 public:
  void on_dephase(ServerView& view, Gadget& g, Z8 revealed) override;
  BitString on_std_measure(ServerView& view, Gadget& g) override;
  BitString on_combine_measure(ServerView& view, Gadget& acc, Gadget& next, const LookupTable& table) override;
  BitString on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) override;

 private:
  bool active(const ServerView& view) const { return active_ && view.context == "BNTest"; }
  bool active_ = false;
  std::optional<int> collapsed_;
};

/// Builds a fresh per-session strategy instance.
using StrategyFactory = std::function<std::unique_ptr<Strategy>()>;

/// {"attack": name, ...}. Names: honest, conjugate (optional "inner" spec),
/// phase_offset ("f", "g" map specs), random_response, always_lose,
/// ghz_collapse. Throws ContractError on unknown names or bad parameters.
StrategyFactory make_strategy_factory(const nlohmann::json& spec);
/// Accepts a bare name or a JSON object.
StrategyFactory parse_strategy(std::string_view text);
std::vector<std::string> strategy_names();

}  // namespace cvqc
