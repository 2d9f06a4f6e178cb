#include "cvqc/reference.hpp"

#include <cmath>

#include "cvqc/errors.hpp"

namespace cvqc::reference {

std::vector<double> hadamard_distribution(const Gadget& g, const BitString& pad, Oracle& oracle) {
  const HadamardLaw law = hadamard_law(g, pad, oracle);
  const std::size_t n = law.w0.size();
  require(n <= 24, "reference: register too large to enumerate");
  std::vector<Amplitude> psi(std::size_t{1} << n);
  const double norm = std::sqrt(g.norm());
  psi[law.w0.to_uint()] += g.amp0 / norm;
  psi[law.w1.to_uint()] += g.amp1 / norm;

  for (std::size_t h = 1; h < psi.size(); h <<= 1)
    for (std::size_t i = 0; i < psi.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const Amplitude a = psi[j], b = psi[j + h];
        psi[j] = a + b;
        psi[j + h] = a - b;
      }

  std::vector<double> p(psi.size());
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  for (std::size_t i = 0; i < psi.size(); ++i) p[i] = std::norm(psi[i]) * scale;
  return p;
}

std::vector<double> hadamard_law_table(const Gadget& g, const BitString& pad, Oracle& oracle) {
  const HadamardLaw law = hadamard_law(g, pad, oracle);
  const std::size_t n = law.w0.size();
  require(n <= 24, "reference: register too large to enumerate");
  std::vector<double> p(std::size_t{1} << n);
  for (std::size_t d = 0; d < p.size(); ++d) p[d] = law.probability(BitString::from_uint(d, n));
  return p;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  require(p.size() == q.size(), "total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

}  // namespace cvqc::reference
