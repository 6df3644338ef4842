#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dwkit/group.hpp"
#include "dwkit/linalg.hpp"
#include "dwkit/phase.hpp"

namespace dwkit {

/// Normalized n-cochain G^n -> (1/M)Z/Z.  Values are integer numerators over
/// the common modulus M, stored densely in row-major tuple order
/// (key = sum t_i |G|^{n-1-i}); tuples containing the identity are always 0.
class Cochain {
 public:
  Cochain(GroupPtr g, int degree, int64_t modulus = 1);

  const GroupPtr& group() const { return g_; }
  int degree() const { return n_; }
  int64_t modulus() const { return mod_; }
  size_t size() const { return vals_.size(); }

  uint64_t key(const std::vector<int>& t) const;
  std::vector<int> tuple(uint64_t key) const;

  int64_t numerator(uint64_t key) const { return vals_[key]; }
  PhaseValue at(const std::vector<int>& t) const { return PhaseValue(vals_[key(t)], mod_); }
  PhaseValue at_key(uint64_t k) const { return PhaseValue(vals_[k], mod_); }
  /// Writes a value, widening the modulus if needed.  Throws on a nonzero
  /// value at a degenerate tuple.
  void set(const std::vector<int>& t, const PhaseValue& v);
  /// Writes numerator/modulus() at `key` (no widening).
  void set_numerator(uint64_t key, int64_t num);

  /// Same cochain over modulus m; m must be a multiple of denominator().
  Cochain rescaled(int64_t m) const;
  /// lcm of the reduced denominators of all values (1 for the zero cochain).
  int64_t denominator() const;
  bool is_zero() const;

  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain operator-() const;
  Cochain operator*(int64_t k) const;
  bool operator==(const Cochain& o) const;
  bool operator!=(const Cochain& o) const { return !(*this == o); }

  /// Nonzero values in key order.
  std::vector<std::pair<std::vector<int>, PhaseValue>> entries() const;
  bool is_degenerate(uint64_t key) const;

 private:
  void widen(int64_t m);

  GroupPtr g_;
  int n_;
  int64_t mod_;
  std::vector<int64_t> vals_;
};

/// Dense index of normalized tuples (entries avoid the identity).
class TupleIndex {
 public:
  TupleIndex(const FiniteGroup& g, int n);
  int degree() const { return n_; }
  int64_t count() const { return count_; }
  int64_t index(const int* t) const;
  void tuple(int64_t idx, int* out) const;
  /// Row-major key in G^n of the tuple at `idx`.
  uint64_t full_key(int64_t idx) const;

 private:
  int n_, base_;
  int64_t count_ = 1;
  std::vector<int> rank_, elem_;
  int order_;
};

/// Coboundary with trivial coefficients:
/// (dc)(g1..g_{n+1}) = c(g2..) + sum_i (-1)^i c(..g_i g_{i+1}..) + (-1)^{n+1} c(g1..g_n).
Cochain coboundary(const Cochain& c, bool parallel = true);
bool is_cocycle(const Cochain& c);

/// Matrix of d: C^n -> C^{n+1} on normalized tuples in TupleIndex order.
IntMatrix coboundary_matrix(const FiniteGroup& g, int n, int64_t modulus = 0);

/// Numerators over `m` in TupleIndex order (the solver column layout).
std::vector<int64_t> to_normalized_vector(const Cochain& c, int64_t m);
Cochain from_normalized_vector(const GroupPtr& g, int n, const std::vector<int64_t>& v, int64_t m);

/// (f^* c)(g1..gn) = c(f g1, .., f gn).
Cochain pullback(const GroupHom& f, const Cochain& c);

/// Integer chain on the normalized bar complex.
class FormalChain {
 public:
  FormalChain(GroupPtr g, int degree) : g_(std::move(g)), n_(degree) {}

  const GroupPtr& group() const { return g_; }
  int degree() const { return n_; }
  const std::map<std::vector<int>, int64_t>& terms() const { return terms_; }
  /// Adds coeff * [t]; degenerate simplices are dropped.
  void add(const std::vector<int>& t, int64_t coeff);
  void add(const FormalChain& z, int64_t coeff = 1);
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const FormalChain& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  GroupPtr g_;
  int n_;
  std::map<std::vector<int>, int64_t> terms_;
};

/// d[g1..gn] = [g2..gn] + sum_i (-1)^i [..g_i g_{i+1}..] + (-1)^n [g1..g_{n-1}].
FormalChain boundary(const FormalChain& z);
/// Signed sum over (p,q)-shuffles of the two bar simplices, in the common group.
FormalChain shuffle_cross(const FormalChain& a, const FormalChain& b);
/// Iterated shuffle of the 1-cycles (g_i); throws NonCommuting.
FormalChain torus_fundamental_cycle(const GroupPtr& g, const std::vector<int>& tuple);
/// Applies an element map (e.g. a homomorphism) to every simplex.
FormalChain map_chain(const FormalChain& z, const GroupPtr& target, const std::vector<int>& map);
/// Prism operator P_eta[y1..yn] = sum_i (-1)^i [y1..y_i | eta | eta^-1 y_{i+1} eta | ..];
/// satisfies dP + Pd = c_eta - id with c_eta(y) = eta^-1 y eta.
FormalChain prism(const FormalChain& z, int eta);

/// sum coeff * c(tuple) mod 1.
PhaseValue evaluate(const Cochain& c, const FormalChain& z);

/// Degree n-1 cochain on `source`: z -> <w, P_eta(map z)>, where `map` sends
/// source elements into w's group.
Cochain prism_pairing(const Cochain& w, int eta, const GroupPtr& source, const std::vector<int>& map);

/// Phi(d) = -<w_hat, P_g(iota d)>, so that
/// d Phi = iota^* w_hat - (d -> g^-1 d g)^* iota^* w_hat for closed w_hat.
Cochain interval_pairing(const Cochain& w_hat, int g_hat, const GroupHom& iota);

// Catalog.
/// k a1 b2 / N on Z_N x Z_N.
Cochain omega_zn_zn(int n, int k);
/// 0 for j = 0, i'/4 for j = 1 at (a^i b^j, a^i' b^j') on D8.
Cochain d8_cocycle();
/// k a floor((b + c)/N) / N on Z_N.
Cochain zn_cocycle3(int n, int k);
/// floor((a + b)/M) mod N, the Z_N-valued 2-cocycle on Z_M.
std::vector<std::vector<int>> floor_extension_sigma(int n, int m);
/// Dispatch by family name: "omega" {N,k}, "d8" {}, "zn3" {N,k}.
Cochain catalog_cocycle(const std::string& name, const std::vector<int>& params);

}  // namespace dwkit
