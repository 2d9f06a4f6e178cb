#include "cvqc/gadget.hpp"

#include <cmath>
#include <numbers>

#include "cvqc/errors.hpp"

namespace cvqc {

namespace {

constexpr double kHalfRoot = M_SQRT1_2;

double branch_weight(Amplitude a, Amplitude b) { return std::norm(a) + std::norm(b); }

}  // namespace

Amplitude phase_unit(Z8 theta) {
  static const Amplitude kUnits[8] = {
      {1.0, 0.0},   {kHalfRoot, kHalfRoot},   {0.0, 1.0},  {-kHalfRoot, kHalfRoot},
      {-1.0, 0.0},  {-kHalfRoot, -kHalfRoot}, {0.0, -1.0}, {kHalfRoot, -kHalfRoot},
  };
  return kUnits[theta.value()];
}

Gadget make_gadget(const KeyPair& keys, std::optional<PhasePair> phases) {
  require(keys.x0 != keys.x1, "make_gadget: keys must be distinct");
  Gadget g{keys, {kHalfRoot, 0.0}, {kHalfRoot, 0.0}};
  if (phases) {
    g.amp0 = kHalfRoot * phase_unit(phases->t0);
    g.amp1 = kHalfRoot * phase_unit(phases->t1);
  }
  return g;
}

Gadget apply_phases(Gadget g, const PhasePair& phases) {
  g.amp0 *= phase_unit(phases.t0);
  g.amp1 *= phase_unit(phases.t1);
  return g;
}

PhasePair decrypt_branch_phases(const Gadget& g, const LookupTable& table, const BitString& helper_key,
                                Oracle& oracle) {
  if (table.group != Group::Z8) throw TableMismatch("phase table must be over Z8");
  Z8 phase[2];
  for (int b = 0; b < 2; ++b) {
    const RowMatch m = decrypt_row(table, helper_key + g.keys[b], oracle);
    if (!m.ok()) throw TableMismatch("phase table does not open on every branch");
    phase[b] = z8_from_bits(m.plaintext);
  }
  return {phase[0], phase[1]};
}

Gadget apply_phase_table(const Gadget& g, const LookupTable& table, const BitString& helper_key,
                         Oracle& oracle) {
  return apply_phases(g, decrypt_branch_phases(g, table, helper_key, oracle));
}

Gadget dephase(Gadget g, Z8 revealed) {
  g.amp1 *= phase_unit(-revealed);
  return g;
}

Gadget conjugate(Gadget g) {
  g.amp0 = std::conj(g.amp0);
  g.amp1 = std::conj(g.amp1);
  return g;
}

StdOutcome std_sample(const Gadget& g, Rng& rng, double* outcome_prob) {
  const double p0 = std::norm(g.amp0) / g.norm();
  const int bit = rng.uniform() < p0 ? 0 : 1;
  if (outcome_prob) *outcome_prob = bit ? 1.0 - p0 : p0;
  return {bit, g.keys[bit]};
}

double parity_zero_probability(const Gadget& g) { return std::norm(g.amp0 + g.amp1) / (2.0 * g.norm()); }

double HadamardLaw::probability(const BitString& d) const {
  const std::size_t n = w0.size();
  const bool c = d.dot(difference());
  return (c ? 1.0 - p_parity0 : p_parity0) / std::ldexp(1.0, static_cast<int>(n) - 1);
}

HadamardLaw hadamard_law(const Gadget& g, const BitString& pad, Oracle& oracle) {
  const std::size_t kappa = pad.size();
  HadamardLaw law;
  law.w0 = g.keys.x0 + oracle.query(pad + g.keys.x0, kappa);
  law.w1 = g.keys.x1 + oracle.query(pad + g.keys.x1, kappa);
  law.p_parity0 = parity_zero_probability(g);
  return law;
}

BitString hadamard_sample(const Gadget& g, const BitString& pad, Oracle& oracle, Rng& rng,
                          double* outcome_prob) {
  const HadamardLaw law = hadamard_law(g, pad, oracle);
  const BitString v = law.difference();
  if (v.none()) throw ContractError("hadamard_sample: branches coincide");
  const bool c = !(rng.uniform() < law.p_parity0);
  if (outcome_prob) *outcome_prob = c ? 1.0 - law.p_parity0 : law.p_parity0;
  BitString d = rng.bits(v.size());
  // Flipping a coordinate where v is set swaps the two parity classes, so this
  // maps a uniform d onto a uniform member of class c.
  if (d.dot(v) != c) d.flip(v.first_set());
  return d;
}

CombineOutcome combine_step(const Gadget& a, const Gadget& b, const LookupTable& table, Oracle& oracle,
                            Rng& rng, double* outcome_prob) {
  if (table.group != Group::Xor) throw TableMismatch("combine table must be over XOR");
  const std::size_t prefix = b.keys.x0.size();
  if (a.keys.x0.size() < prefix) throw TableMismatch("combine: accumulated key shorter than prefix");

  BitString r[2][2];
  for (int ba = 0; ba < 2; ++ba)
    for (int bb = 0; bb < 2; ++bb) {
      const RowMatch m = decrypt_row(table, a.keys[ba].prefix(prefix) + b.keys[bb], oracle);
      if (!m.ok()) throw TableMismatch("combine table does not open on every branch pair");
      r[ba][bb] = m.plaintext;
    }
  if (r[0][0] != r[1][1] || r[0][1] != r[1][0] || r[0][0] == r[0][1])
    throw TableMismatch("combine table is not a parity table");

  const double total = a.norm() * b.norm();
  const double p_aligned = branch_weight(a.amp0 * b.amp0, a.amp1 * b.amp1) / total;
  const bool aligned = rng.uniform() < p_aligned;
  const double p = aligned ? p_aligned : 1.0 - p_aligned;
  if (outcome_prob) *outcome_prob = p;

  CombineOutcome out;
  const double scale = 1.0 / std::sqrt(p * total);
  if (aligned) {
    out.r = r[0][0];
    out.combined.keys = {a.keys.x0 + b.keys.x0, a.keys.x1 + b.keys.x1};
    out.combined.amp0 = a.amp0 * b.amp0 * scale;
    out.combined.amp1 = a.amp1 * b.amp1 * scale;
  } else {
    out.r = r[0][1];
    out.combined.keys = {a.keys.x0 + b.keys.x1, a.keys.x1 + b.keys.x0};
    out.combined.amp0 = a.amp0 * b.amp1 * scale;
    out.combined.amp1 = a.amp1 * b.amp0 * scale;
  }
  return out;
}

DecodedOutput decode_output(std::span<const Gadget> gadgets, std::span<const KeyPair> revealed) {
  require(gadgets.size() == revealed.size(), "decode_output: one key pair per gadget");
  DecodedOutput out;
  out.state.thetas.reserve(gadgets.size());
  constexpr double kTol = 1e-9;
  for (std::size_t i = 0; i < gadgets.size(); ++i) {
    const Gadget& g = gadgets[i];
    require(g.keys == revealed[i], "decode_output: gadget keys do not match the revealed pair");
    const double n = std::sqrt(g.norm());
    const Amplitude a0 = g.amp0 / n, a1 = g.amp1 / n;
    if (std::abs(std::abs(a0) - kHalfRoot) > kTol || std::abs(std::abs(a1) - kHalfRoot) > kTol)
      throw NonHonestForm("decode_output: branches are not equally weighted");
    const Amplitude ratio = a1 / a0;
    const int k = static_cast<int>(std::lround(std::arg(ratio) * 4.0 / std::numbers::pi));
    const Z8 theta(k);
    if (std::abs(ratio - phase_unit(theta)) > kTol)
      throw NonHonestForm("decode_output: relative phase is not a multiple of pi/4");
    out.state.thetas.push_back(theta);
    out.global_phase *= a0 / std::abs(a0);
  }
  return out;
}

DecodedOutput apply_x_all(DecodedOutput out) {
  for (auto& theta : out.state.thetas) {
    out.global_phase *= phase_unit(theta);
    theta = -theta;
  }
  return out;
}

double fidelity_ideal(const PlusStateVector& decoded, std::span<const Z8> client_thetas) {
  require(decoded.thetas.size() == client_thetas.size(), "fidelity_ideal: length mismatch");
  double f = 1.0;
  for (std::size_t i = 0; i < client_thetas.size(); ++i) {
    const int diff = (decoded.thetas[i] - client_thetas[i]).value();
    // cos^2 of multiples of π/8 from the exact table: |1 + e^{iφ}|^2 / 4.
    f *= std::norm(Amplitude{1.0, 0.0} + phase_unit(Z8(diff))) / 4.0;
  }
  return f;
}

}  // namespace cvqc
