#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dwkit/cochain.hpp"
#include "dwkit/phase.hpp"

namespace dwkit {

/// Objects of Bun_G(T^m): commuting m-tuples, with x acting as t -> x^-1 t x.
/// For m = 0 there is one object, the empty tuple.
class LoopObjects {
 public:
  LoopObjects(GroupPtr g, int m);

  const GroupPtr& group() const { return g_; }
  int dim() const { return m_; }
  int count() const { return static_cast<int>(tuples_.size()); }
  const std::vector<int>& tuple(int o) const { return tuples_[o]; }
  /// Object index of a tuple, or -1 if the entries do not commute.
  int find(const std::vector<int>& t) const;
  /// Target of the morphism x out of o, i.e. the object x^-1 t x.
  int act(int o, int x) const { return act_[static_cast<size_t>(o) * g_->order() + x]; }

 private:
  GroupPtr g_;
  int m_;
  std::vector<std::vector<int>> tuples_;
  std::vector<int> act_;
  std::unordered_map<uint64_t, int> index_;
};

using LoopObjectsPtr = std::shared_ptr<const LoopObjects>;

/// Normalized k-cochain on the action groupoid Bun_G(T^m): a value for every
/// object t and every k-tuple of morphisms x1..xk (t -> t^x1 -> ...), stored
/// as numerators over a common modulus.  m = 0 recovers group cochains.
class LoopCochain {
 public:
  LoopCochain(LoopObjectsPtr objects, int degree, int64_t modulus = 1);
  static LoopCochain from_cochain(const Cochain& c);

  const LoopObjectsPtr& objects() const { return obj_; }
  const GroupPtr& group() const { return obj_->group(); }
  int base_dim() const { return obj_->dim(); }
  int degree() const { return k_; }
  int64_t modulus() const { return mod_; }

  uint64_t key(const std::vector<int>& xs) const;
  int64_t numerator(int o, uint64_t key) const { return vals_[static_cast<size_t>(o) * stride_ + key]; }
  PhaseValue at(int o, const std::vector<int>& xs) const { return PhaseValue(numerator(o, key(xs)), mod_); }
  void set_numerator(int o, uint64_t key, int64_t num);
  uint64_t stride() const { return stride_; }
  bool is_degenerate(uint64_t key) const;
  std::vector<int> tuple(uint64_t key) const;

  LoopCochain rescaled(int64_t m) const;
  int64_t denominator() const;
  bool is_zero() const;
  LoopCochain operator+(const LoopCochain& o) const;
  LoopCochain operator-(const LoopCochain& o) const;
  LoopCochain operator-() const;
  bool operator==(const LoopCochain& o) const;
  bool operator!=(const LoopCochain& o) const { return !(*this == o); }

 private:
  LoopObjectsPtr obj_;
  int k_;
  int64_t mod_;
  uint64_t stride_;
  std::vector<int64_t> vals_;
};

/// (dc)(t; x1..x_{j+1}) = c(t^x1; x2..) + sum_i (-1)^i c(t; ..x_i x_{i+1}..) + (-1)^{j+1} c(t; x1..xj).
LoopCochain loop_coboundary(const LoopCochain& c);
bool is_loop_cocycle(const LoopCochain& c);

/// beta of degree k-1 with (d beta)(t; ..) = y(t; ..) at every object t with
/// support[t] set, found over Z/modulus (default: lcm of y's denominators
/// times |G|).  The support must be a union of isomorphism classes.
std::optional<LoopCochain> solve_loop_coboundary(const LoopCochain& y, const std::vector<bool>& support,
                                                 std::optional<int64_t> modulus = std::nullopt);

/// One circle transgression Bun_G(T^m) -> Bun_G(T^{m+1}), lowering the degree:
///   (tau c)((t, g); x1..x_{k-1}) = sum_i (-1)^i c(t; x1..x_i, g_i, x_{i+1}..x_{k-1})
/// with g_i = (x1..x_i)^-1 g (x1..x_i).  The new loop coordinate is appended
/// to the tuple.  Works on any cochain; closedness is not required.
LoopCochain transgress(const LoopCochain& c);
/// Circle transgression of a group cocycle; throws NotACocycle.
LoopCochain transgress_circle(const Cochain& theta);
/// `times` iterated transgressions of a group cochain (no cocycle check).
LoopCochain transgress_iterated(const Cochain& theta, int times);

/// Twisted-double 2-cocycle on Z_N-like groups written additively:
///   beta_g(x, y) = theta(g,x,y) + theta(x,y,(xy)^-1 g (xy)) - theta(x, x^-1 g x, y).
/// Independent formula used for the cross-check with transgression.
PhaseValue dpr_cocycle(const Cochain& theta, int g, int x, int y);
/// Global sign relating transgress_circle to dpr_cocycle: tau = sign * beta.
constexpr int kDprSign = 1;

/// Exact torus partition function (1/|G|) sum over commuting n-tuples of
/// exp(2 pi i <theta, [T^n]>).
struct TorusPartition {
  int64_t modulus = 1;               // phases are residues mod this
  std::vector<int64_t> histogram;    // number of tuples per residue
  int64_t group_order = 1;
  Cyclotomic value;
  int64_t integer = 0;               // value, asserted to be a nonnegative integer
};

/// Throws NotACocycle, DegreeMismatch; Error if the value is not a
/// nonnegative integer.
TorusPartition dw_partition_torus(const GroupPtr& g, const Cochain& theta, int n, bool parallel = true);
/// Serial reference: evaluate against torus_fundamental_cycle tuple by tuple.
TorusPartition dw_partition_torus_reference(const GroupPtr& g, const Cochain& theta, int n);
/// <theta, [T^n]> at a commuting tuple, summed over coordinate permutations.
PhaseValue torus_evaluate(const Cochain& theta, const std::vector<int>& tuple);

int64_t twisted_irrep_count(const GroupPtr& g, const Cochain& omega);
int64_t drinfeld_double_simple_count(const GroupPtr& g, const Cochain& theta);

/// Parallel sections of a line bundle on an action groupoid: the bundle is
/// the 1-cocycle A(o, x), read as f(act(o, x)) = exp(2 pi i A(o, x)) f(o).
struct TwistedOrbits {
  std::vector<int> orbit_of;                // per object
  std::vector<int> rep;                     // per orbit
  std::vector<bool> trivial;                // per orbit: character on the stabilizer is trivial
  std::vector<PhaseValue> transport;        // per object: value of the rep's section there
  std::vector<int> basis;                   // orbits with trivial character, in order
  std::vector<int> basis_index;             // per orbit, -1 if not in the basis
};
TwistedOrbits twisted_orbits(int objects, const GroupPtr& g, const std::function<int(int, int)>& act,
                             const std::function<PhaseValue(int, int)>& phase);

/// Z_DW(T^{n-1}) as parallel sections of the line bundle tau^{n-1} theta on
/// Bun_G(T^{n-1}).
struct StateSpace {
  GroupPtr group;
  Cochain theta;
  int degree = 0;    // n, the degree of theta
  int torus_dim = 0;  // n - 1
  LoopCochain line;  // tau^{n-1} theta, degree 1
  TwistedOrbits orbits;

  int dimension() const { return static_cast<int>(orbits.basis.size()); }
  /// Object of the representative of basis vector b.
  int basis_object(int b) const { return orbits.rep[orbits.basis[b]]; }
  /// Value of basis section b at object o, if o lies in its orbit.
  std::optional<PhaseValue> section_value(int b, int o) const;
};
StateSpace state_space_torus(const GroupPtr& g, const Cochain& theta);

/// Square matrix with one nonzero phase per column: column j maps to row
/// perm[j] with phase[j].
struct MonomialMatrix {
  std::vector<int> perm;
  std::vector<PhaseValue> phase;

  MonomialMatrix compose(const MonomialMatrix& right) const;  // this * right
  bool operator==(const MonomialMatrix& o) const { return perm == o.perm && phase == o.phase; }
};

/// Quantum symmetry on a state space of D: (g.f)(phi) = f(alpha(g^-1) phi) exp(2 pi i <phi^* Phi_g, [T]>).
struct SymmetryAction {
  GroupPtr group;
  std::vector<MonomialMatrix> rho;  // indexed by g
  /// defect[g1 * |G| + g2][row]: rho(g2) rho(g1) = exp(2 pi i defect) rho(g2 g1), row by row.
  std::vector<std::vector<PhaseValue>> defect;
  bool honest = true;
};
/// alpha[g] is an automorphism table of D; phi[g] is an (n-1)-cochain on D.
/// Throws IncompatiblePhases if d Phi_g != omega - alpha(g^-1)^* omega or if a
/// transformed section fails to be parallel.
SymmetryAction symmetry_action(const GroupPtr& G, const std::vector<std::vector<int>>& alpha,
                               const std::vector<Cochain>& phi, const StateSpace& s);

}  // namespace dwkit
