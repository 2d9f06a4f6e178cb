#pragma once

#include <ostream>

/// Brute-force cross-checks of the core samplers and primitives. Returns the
/// number of failed checks.
int run_selftest(std::ostream& out);
