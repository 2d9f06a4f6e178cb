#include "selftest.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "cvqc/adversary.hpp"
#include "cvqc/protocol.hpp"
#include "cvqc/reference.hpp"

using namespace cvqc;

namespace {

int report(std::ostream& out, bool ok, const std::string& name, const std::string& detail) {
  out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
  return ok ? 0 : 1;
}

int hadamard_vs_enumeration(std::ostream& out) {
  RandomOracle oracle(seed_from_hex("5e1f"));
  Rng rng(seed_from_hex("5e1f01"));
  double worst = 0.0;
  int cases = 0;
  for (std::size_t x = 1; x <= 4; ++x)
    for (std::size_t kappa = 1; kappa <= 4; ++kappa)
      for (int theta = 0; theta < 8; ++theta) {
        BitString x0 = rng.bits(x), x1 = rng.bits(x);
        while (x1 == x0) x1 = rng.bits(x);
        const Gadget g = make_gadget({x0, x1}, PhasePair{0, theta});
        const BitString pad = rng.bits(kappa);
        const double tv = reference::total_variation(reference::hadamard_distribution(g, pad, oracle),
                                                     reference::hadamard_law_table(g, pad, oracle));
        worst = std::max(worst, tv);
        ++cases;
      }
  char tv[32];
  std::snprintf(tv, sizeof tv, "%.3g", worst);
  return report(out, worst < 1e-12, "hadamard-sampler-vs-enumeration",
                std::to_string(cases) + " cases, max TV " + tv);
}

int table_round_trip(std::ostream& out) {
  RandomOracle oracle(seed_from_hex("7ab1e5"));
  Rng rng(seed_from_hex("7ab1e501"));
  const std::size_t kappa = 12;
  int bad = 0;
  for (int t = 0; t < 500; ++t) {
    const BitString key = rng.bits(2 * kappa);
    const BitString pz = z8_bits(static_cast<int>(rng.below(8)));
    const BitString px = rng.bits(kappa);
    LookupTable tz{Group::Z8, kappa, {encrypt(key, pz, Group::Z8, kappa, oracle, rng)}};
    LookupTable tx{Group::Xor, kappa, {encrypt(key, px, Group::Xor, kappa, oracle, rng)}};
    const auto a = decrypt_row(tz, key, oracle);
    const auto b = decrypt_row(tx, key, oracle);
    if (!a.ok() || a.plaintext != pz || !b.ok() || b.plaintext != px) ++bad;
  }
  return report(out, bad == 0, "table-round-trip", "1000 encryptions, " + std::to_string(bad) + " mismatches");
}

int ntcf_exhaustive(std::ostream& out) {
  const HiddenShiftNtcf ntcf;
  Rng rng(seed_from_hex("c1a3"));
  const std::size_t kappa = 4;
  const auto km = ntcf.keygen(kappa, rng);
  std::map<std::string, int> preimages;
  bool chk_ok = true;
  for (int b = 0; b < 2; ++b)
    for (std::uint64_t x = 0; x < 16; ++x) {
      const BitString xs = BitString::from_uint(x, kappa);
      const BitString y = ntcf.eval(km.pk, b, xs);
      ++preimages[y.to_binary()];
      const auto back = ntcf.dec(km.sk, b, y);
      chk_ok = chk_ok && back && *back == xs && ntcf.chk(km.pk, b, xs, y);
    }
  bool two_to_one = true;
  for (const auto& [y, n] : preimages) two_to_one = two_to_one && n == 2;
  return report(out, chk_ok && two_to_one, "ntcf-exhaustive-kappa4",
                std::to_string(preimages.size()) + " images, each with two preimages");
}

int honest_branches(std::ostream& out) {
  const HiddenShiftNtcf ntcf;
  int failures = 0;
  for (Branch b : {Branch::StdBTestAll, Branch::StdBTest, Branch::CoPhTest, Branch::InPhTest, Branch::BNTest,
                   Branch::Output}) {
    int fails = 0;
    double min_fid = 1.0;
    for (int j = 0; j < 200; ++j) {
      SessionConfig sc;
      sc.L = 4;
      sc.kappa = 16;
      sc.record_transcript = false;
      sc.overrides.branch = b;
      if (b == Branch::InPhTest) sc.overrides.delta = (j % 2) ? 4 : 0;
      HonestStrategy honest;
      Session s(sc, ntcf, honest, derive_seed(seed_from_hex("b4a9"), to_string(b), j));
      const auto o = s.run();
      if (o.flag == Flag::Fail) ++fails;
      if (o.outputs) min_fid = std::min(min_fid, o.outputs->fidelity);
    }
    failures += report(out, fails == 0 && min_fid == 1.0, std::string("honest-") + to_string(b),
                       "200 sessions, " + std::to_string(fails) + " failed");
  }
  return failures;
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failed = 0;
  failed += hadamard_vs_enumeration(out);
  failed += table_round_trip(out);
  failed += ntcf_exhaustive(out);
  failed += honest_branches(out);
  out << (failed ? "selftest: " + std::to_string(failed) + " check(s) failed" : std::string("selftest: all passed"))
      << '\n';
  return failed;
}
