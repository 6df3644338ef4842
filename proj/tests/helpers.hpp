#pragma once

#include <random>

#include "dwkit/cochain.hpp"

namespace dwkit_test {

/// Random normalized n-cochain with values in (1/m)Z/Z.
inline dwkit::Cochain random_cochain(std::mt19937_64& rng, const dwkit::GroupPtr& g, int n, int64_t m) {
  dwkit::Cochain c(g, n, m);
  std::uniform_int_distribution<int64_t> val(0, m - 1);
  for (uint64_t k = 0; k < c.size(); ++k)
    if (!c.is_degenerate(k)) c.set_numerator(k, val(rng));
  return c;
}

}  // namespace dwkit_test
