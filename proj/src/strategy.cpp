#include "cvqc/strategy.hpp"

namespace cvqc {

namespace {

void note(ServerView& view, double p) {
  if (view.probe) view.probe->push_back(p);
}

}  // namespace

BitString Strategy::on_setup(ServerView& view, const Ntcf& ntcf, const NtcfPublicKey& pk, Gadget& out) {
  ClawResult claw = ntcf.eval_claw(pk, view.rng);
  out = make_gadget({std::move(claw.x0), std::move(claw.x1)});
  return claw.y;
}

void Strategy::on_table_received(ServerView& view, Gadget& target, const Gadget& helper, const LookupTable& table) {
  target = apply_phase_table(target, table, helper.keys.x0, view.oracle);
}

void Strategy::on_dephase(ServerView&, Gadget& g, Z8 revealed) { g = dephase(g, revealed); }

BitString Strategy::on_std_measure(ServerView& view, Gadget& g) {
  double p = 0.0;
  StdOutcome o = std_sample(g, view.rng, &p);
  note(view, p);
  return std::move(o.key);
}

BitString Strategy::on_combine_measure(ServerView& view, Gadget& acc, Gadget& next, const LookupTable& table) {
  double p = 0.0;
  CombineOutcome o = combine_step(acc, next, table, view.oracle, view.rng, &p);
  note(view, p);
  acc = std::move(o.combined);
  return std::move(o.r);
}

BitString Strategy::on_hadamard_measure(ServerView& view, Gadget& g, const BitString& pad) {
  double p = 0.0;
  BitString d = hadamard_sample(g, pad, view.oracle, view.rng, &p);
  note(view, p);
  return d;
}

DecodedOutput Strategy::on_decode_output(ServerView&, std::span<const Gadget> gadgets,
                                         std::span<const KeyPair> revealed) {
  return decode_output(gadgets, revealed);
}

}  // namespace cvqc
