#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dwkit/cochain.hpp"
#include "dwkit/dw.hpp"

namespace dwkit {

/// (alpha, sigma) with alpha[g] an automorphism table of D and sigma[g1][g2] in D.
struct NonAbelianCocycle {
  GroupPtr G, D;
  std::vector<std::vector<int>> alpha;
  std::vector<std::vector<int>> sigma;

  /// Exhaustive check of
  ///   alpha(1) = id, sigma(1,1) = 1,
  ///   alpha(g1 g2)[d] = sigma(g1,g2)^-1 alpha(g1)[alpha(g2)[d]] sigma(g1,g2),
  ///   sigma(g1,g2) sigma(g1 g2,g3) = alpha(g1)[sigma(g2,g3)] sigma(g1,g2 g3);
  /// throws InvalidCocycle naming the first violated relation.
  void validate() const;
};

/// 1 -> D -> Ghat -> G -> 1 with a set-theoretic section s (s(1) = 1).
struct Extension {
  GroupPtr D, Ghat, G;
  GroupHom iota, lambda;
  std::vector<int> section;

  /// Throws InvalidExtension (exactness) or SectionNotValid.
  void validate() const;
  /// s(g^-1)^-1, the lift used for the pullback alpha(g^-1).
  int lift_inverse(int g) const { return Ghat->inv(section[G->inv(g)]); }
};

/// Validated extension; when `section` is empty the first lift of each g in
/// element order is used.
Extension make_extension(GroupPtr D, GroupPtr Ghat, GroupPtr G, std::vector<int> iota, std::vector<int> lambda,
                         std::vector<int> section = {});
/// N -> Ghat -> Ghat/N for a normal subgroup given by its elements.
Extension extension_from_normal_subgroup(const GroupPtr& ghat, const std::vector<int>& normal);

/// Ghat on the set G x D, index d + |D| g, with
/// (g2,d2)(g1,d1) = (g2 g1, d2 alpha(g2)[d1] sigma(g2,g1)); section s(g) = (g, 1).
Extension extension_from_cocycle(const NonAbelianCocycle& nc);
/// alpha(g) = conjugation by s(g) on iota(D), sigma(g1,g2) = iota^-1(s(g1) s(g2) s(g1 g2)^-1).
NonAbelianCocycle cocycle_from_extension(const Extension& ext);

/// Some isomorphism a -> b as an element map, found by backtracking over
/// images of a generating set.
std::optional<std::vector<int>> find_isomorphism(const GroupPtr& a, const GroupPtr& b);
/// Isomorphism of the middle groups commuting with iota and lambda.
std::optional<std::vector<int>> extension_equivalence(const Extension& a, const Extension& b);

// Catalog.
/// Z_N -> Z_{NM} -> Z_M, iota(a) = M a, lambda = reduction mod M.
Extension cyclic_extension(int n, int m);
/// Componentwise Z_N^2 -> Z_{NM}^2 -> Z_M^2.
Extension cyclic_square_extension(int n, int m);
/// D8 -> P1 -> Z2 with Z2 acting by conjugation with a.
Extension pauli_extension();
/// Z_N^2 -> Ghat -> Z_M (N | M) with g acting by the shear (x, y) -> (x, y + g x)
/// and sigma(g, h) = floor((g + h)/M) (0, 1).
Extension shear_extension(int n, int m);

/// Phi'_g with d Phi'_g = omega - alpha(g^-1)^* omega for every g.
struct InvarianceResult {
  bool invariant = false;
  std::vector<Cochain> phi;  // filled when invariant
};
InvarianceResult is_invariant_class(const Extension& ext, const Cochain& omega);

/// sigma_{g1,g2}[omega]: the prism pairing of omega along sigma(g2^-1, g1^-1)
/// after alpha(g2^-1) alpha(g1^-1); its coboundary is the failure of
/// alpha^* to be multiplicative on omega.
Cochain sigma_term(const Extension& ext, const Cochain& omega, int g1, int g2);
/// U(g1,g2) = Phi_{g1} + alpha(g1^-1)^* Phi_{g2} - Phi_{g1 g2} - sigma_{g1,g2}[omega].
Cochain coherence_defect(const Extension& ext, const Cochain& omega, const std::vector<Cochain>& phi, int g1, int g2);

struct FirstObstructionResult {
  bool trivial = false;
  std::vector<Cochain> phi;  // coherent family Phi_g = Phi'_g + psi_g when trivial
  int64_t modulus = 0;
};
/// Solves U + psi_{g1} + alpha(g1^-1)^* psi_{g2} - psi_{g1 g2} = d beta_{g1,g2}
/// over Z/modulus with closed psi_g (beta only for degree >= 3).  Vacuous
/// (trivial, phi = phi_prime) in degree 1.
FirstObstructionResult is_first_obstruction_trivial(const Extension& ext, const Cochain& omega,
                                                    const std::vector<Cochain>& phi_prime,
                                                    std::optional<int64_t> modulus = std::nullopt);

/// lcm of omega's denominators times |Ghat|.
int64_t default_joint_modulus(const Extension& ext, const Cochain& omega);

struct LiftResult {
  std::optional<Cochain> lift;  // closed omega_hat with iota^* omega_hat = omega
  int64_t modulus = 0;
};
LiftResult find_closed_lift(const Extension& ext, const Cochain& omega, std::optional<int64_t> modulus = std::nullopt);

struct BoundaryPair {
  Cochain omega_prime;  // on Ghat
  Cochain theta;        // on G, degree n + 1
  std::vector<int64_t> theta_factors;
  std::vector<int64_t> theta_class;
};
struct BoundaryPairResult {
  std::optional<BoundaryPair> pair;
  int64_t modulus = 0;
};
/// iota^* omega' = omega, d omega' = lambda^* theta, d theta = 0.
BoundaryPairResult find_boundary_pair(const Extension& ext, const Cochain& omega,
                                      std::optional<int64_t> modulus = std::nullopt);
/// Throws NotABoundaryPair unless d omega' = lambda^* theta and d theta = 0.
void check_boundary_pair(const Extension& ext, const Cochain& omega_prime, const Cochain& theta);

enum class Verdict {
  anomaly_free,
  thooft_anomalous_with_bulk,
  invariance_fails,
  first_obstruction_fails,
  // Degree >= 3 only: the first obstruction vanishes but no boundary pair exists.
  higher_obstruction_fails,
};
std::string verdict_name(Verdict v);

struct ObstructionReport {
  Verdict verdict = Verdict::invariance_fails;
  bool invariant_class = false;
  std::vector<Cochain> phi_prime;
  std::optional<bool> first_obstruction_trivial;
  std::vector<Cochain> phi;  // coherent family
  std::optional<Cochain> closed_lift;
  std::optional<BoundaryPair> boundary_pair;
  int64_t obstruction_modulus = 0, lift_modulus = 0, pair_modulus = 0;
  double seconds = 0;
};
/// Runs the checks in order and stops at the first negative one.  A closed
/// lift yields the boundary pair (omega_hat, 0).  `modulus_multiplier`
/// scales the default working modulus of the lift searches.
ObstructionReport anomaly_report(const Extension& ext, const Cochain& omega, int64_t modulus_multiplier = 1);

/// Relative partition function on T^n at a commuting n-tuple phi in G,
/// n = deg omega': the integral over the homotopy fibre of
/// Bun_Ghat(T^n) -> Bun_G(T^n) at phi of <phi_hat^* omega', [T^n]> + <theta, P(h)>.
/// Throws NotABoundaryPair, NonCommuting.
Cyclotomic relative_partition_torus(const Extension& ext, const Cochain& omega_prime, const Cochain& theta,
                                    const std::vector<int>& phi);

/// Twisted sectors of the boundary theory on T^k, k = deg omega' - 1, and the
/// projective G-action between them.
struct ProjectiveStateCocycle {
  int torus_dim = 0;
  std::vector<int> dims;     // state space dimension per object of Bun_G(T^k)
  LoopCochain defect;        // rho(z) rho(y) = exp(2 pi i defect(t; y, z)) rho(yz), zero off the support
  LoopCochain transgressed;  // tau^k theta
  int orientation = 1;       // (-1)^k: defect is compared with orientation * tau^k theta
  bool same_class = false;   // on the full subgroupoid of nonzero sectors
};
ProjectiveStateCocycle projective_state_cocycle(const Extension& ext, const Cochain& omega_prime,
                                                const Cochain& theta);

}  // namespace dwkit
