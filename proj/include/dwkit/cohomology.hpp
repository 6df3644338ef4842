#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dwkit/cochain.hpp"

namespace dwkit {

/// H^n(G; U(1)) computed as the torsion of coker(d_n) = H^{n+1}(G; Z).
struct CohomologyGroup {
  GroupPtr group;
  int degree = 0;
  std::vector<int64_t> factors;     // invariant factors > 1, each dividing the next
  std::vector<Cochain> generators;  // cocycle of order factors[i]
  int64_t modulus = 0;              // 0 if the elimination ran over Z, else |G|^2

  /// Coefficients of the class of `c` in Z/factors[i]; throws NotACocycle.
  std::vector<int64_t> classify(const Cochain& c) const;
  bool is_trivial(const Cochain& c) const;
  /// Sum of coeff[i] * generators[i].
  Cochain combination(const std::vector<int64_t>& coeff) const;
};

struct CohomologyOptions {
  bool allow_large = false;
  int64_t budget = int64_t(1) << 22;
  /// Skip the integral attempt and eliminate over Z/|G|^2 directly.
  bool force_modular = false;
};

/// Nonzero estimate of the bar matrix through degree n+2: (n+3)(|G|-1)^{n+2}.
int64_t cohomology_cost(const FiniteGroup& g, int n);

CohomologyGroup cohomology(const GroupPtr& g, int n, const CohomologyOptions& opt = {});

/// Default working modulus: lcm of the denominators times |G|.
int64_t default_modulus(const Cochain& y);

/// x with dx = y exactly, found over Z/M; nullopt if the system has no
/// solution at that modulus.  `modulus` must be a multiple of y's denominator.
std::optional<Cochain> solve_coboundary(const Cochain& y, std::optional<int64_t> modulus = std::nullopt);
/// Several right-hand sides of the same degree share one elimination.
std::vector<std::optional<Cochain>> solve_coboundaries(const std::vector<Cochain>& ys, int64_t modulus);

}  // namespace dwkit
