#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cvqc/bitstring.hpp"
#include "cvqc/oracle.hpp"
#include "cvqc/rng.hpp"
#include "cvqc/tables.hpp"
#include "cvqc/types.hpp"

namespace cvqc {

using Amplitude = std::complex<double>;

/// e^{iθπ/4}, with the eight values stored exactly rather than via sin/cos.
Amplitude phase_unit(Z8 theta);

/// Two-branch state amp0|x0> + amp1|x1>.
struct Gadget {
  KeyPair keys;
  Amplitude amp0{M_SQRT1_2, 0.0};
  Amplitude amp1{M_SQRT1_2, 0.0};

  Amplitude amp(int b) const { return b ? amp1 : amp0; }
  double norm() const { return std::norm(amp0) + std::norm(amp1); }
};

/// gadget(K, Θ) = (e^{iθ0π/4}|x0> + e^{iθ1π/4}|x1>)/√2; gadget(K) when Θ is absent.
Gadget make_gadget(const KeyPair& keys, std::optional<PhasePair> phases = std::nullopt);

/// Multiplies branch b by e^{iθ_b π/4}.
Gadget apply_phases(Gadget g, const PhasePair& phases);

/// The phase each branch decrypts to from a phase table, with the helper key
/// the server holds. Throws TableMismatch if a branch opens no row.
PhasePair decrypt_branch_phases(const Gadget& g, const LookupTable& table, const BitString& helper_key,
                                Oracle& oracle);

/// Honest phase addition: decrypt per branch, kick back the phase, then
/// uncompute the phase register so no residue is left behind.
Gadget apply_phase_table(const Gadget& g, const LookupTable& table, const BitString& helper_key,
                         Oracle& oracle);

/// Removes a revealed relative phase from branch 1.
Gadget dephase(Gadget g, Z8 revealed);

Gadget conjugate(Gadget g);

struct StdOutcome {
  int bit = 0;
  BitString key;
};

/// Standard-basis measurement. `outcome_prob`, when given, receives the
/// probability of the realised outcome.
StdOutcome std_sample(const Gadget& g, Rng& rng, double* outcome_prob = nullptr);

/// Probability that a Hadamard measurement of the padded gadget lands in the
/// even parity class, |amp0 + amp1|^2 / 2 for a normalised gadget.
double parity_zero_probability(const Gadget& g);

/// Exact outcome law of the RO-padded Hadamard measurement: with
/// w_b = x_b || H(pad||x_b), outcome d has probability Pr[c] / 2^{n-1} where
/// c = d·(w0 xor w1).
struct HadamardLaw {
  BitString w0;
  BitString w1;
  double p_parity0 = 0.0;

  BitString difference() const { return w0 ^ w1; }
  double probability(const BitString& d) const;
};

HadamardLaw hadamard_law(const Gadget& g, const BitString& pad, Oracle& oracle);

/// Samples d in {0,1}^{|x|+κ}: a parity class first, then a uniform member of it.
BitString hadamard_sample(const Gadget& g, const BitString& pad, Oracle& oracle, Rng& rng,
                          double* outcome_prob = nullptr);

struct CombineOutcome {
  BitString r;
  Gadget combined;
};

/// Decrypts a combine table on all four branch pairs and measures the result
/// register. The first |x^B| bits of gA's keys are used as the table prefix.
/// Throws TableMismatch when the table does not fit the gadgets.
CombineOutcome combine_step(const Gadget& a, const Gadget& b, const LookupTable& table, Oracle& oracle,
                            Rng& rng, double* outcome_prob = nullptr);

/// ⊗|+_θi>, one qubit per entry.
struct PlusStateVector {
  std::vector<Z8> thetas;
  bool operator==(const PlusStateVector&) const = default;
};

struct DecodedOutput {
  PlusStateVector state;
  Amplitude global_phase{1.0, 0.0};
};

/// Maps |x0>,|x1> to |0>,|1> on every gadget and reads off the relative phase.
/// Throws ContractError on key mismatch and NonHonestForm when a gadget is not
/// an equal-weight superposition with an 8th-root-of-unity ratio (tol 1e-9).
DecodedOutput decode_output(std::span<const Gadget> gadgets, std::span<const KeyPair> revealed);

/// X on every qubit: X|+_θ> = e^{iθπ/4}|+_{-θ}>.
DecodedOutput apply_x_all(DecodedOutput out);

/// prod_i |<+_θi|+_θ'i>|^2 = prod_i cos^2((θi - θ'i)π/8).
double fidelity_ideal(const PlusStateVector& decoded, std::span<const Z8> client_thetas);

}  // namespace cvqc
