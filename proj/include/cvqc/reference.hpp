#pragma once

#include <vector>

#include "cvqc/gadget.hpp"

namespace cvqc::reference {

/// Full statevector of the padded gadget over {0,1}^n, n = |x| + κ, followed
/// by a Walsh-Hadamard transform. Entry d (first bit most significant) is the
/// probability of measuring d. Exponential in n; for checking only.
std::vector<double> hadamard_distribution(const Gadget& g, const BitString& pad, Oracle& oracle);

/// The sampler's closed-form law evaluated on every outcome, same indexing.
std::vector<double> hadamard_law_table(const Gadget& g, const BitString& pad, Oracle& oracle);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace cvqc::reference
