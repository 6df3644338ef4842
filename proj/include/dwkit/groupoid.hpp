#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "dwkit/group.hpp"
#include "dwkit/phase.hpp"

namespace dwkit {

/// Finite groupoid with materialized objects and morphisms.  Composition and
/// inversion are given as functions so that action groupoids need not store
/// their (large) composition tables.
class FinGroupoid {
 public:
  using Compose = std::function<int(int g, int f)>;  // g o f, needs dst(f) == src(g)
  using Invert = std::function<int(int f)>;

  FinGroupoid() = default;
  FinGroupoid(int objects, std::vector<int> src, std::vector<int> dst, std::vector<int> identities, Compose compose,
              Invert inverse);

  int object_count() const { return objects_; }
  int morphism_count() const { return static_cast<int>(src_.size()); }
  int src(int f) const { return src_[f]; }
  int dst(int f) const { return dst_[f]; }
  int identity(int x) const { return id_[x]; }
  int compose(int g, int f) const;
  int inverse(int f) const { return inv_(f); }

  /// Morphisms out of x.
  const std::vector<int>& out(int x) const { return out_[x]; }
  std::vector<int> hom(int x, int y) const;
  int automorphism_count(int x) const;

  /// Union-find over morphism existence: component id per object, and one
  /// representative per component (smallest object).
  std::vector<int> components() const;
  std::vector<int> representatives() const;

  /// Exhaustive check of the groupoid axioms (units, inverses, associativity
  /// on composable triples); intended for tests on small groupoids.
  bool verify() const;

 private:
  int objects_ = 0;
  std::vector<int> src_, dst_, id_;
  std::vector<std::vector<int>> out_;
  Compose compose_;
  Invert inv_;
};

/// Sum over isomorphism classes of 1/|Aut|.
Rational cardinality(const FinGroupoid& x);

/// Integrand on objects.  Values are checked for gauge invariance along
/// every morphism before summing.
using Integrand = std::function<Cyclotomic(int object)>;
/// sum over iso classes of f(x)/|Aut x|; throws NotGaugeInvariant.
Cyclotomic integrate(const FinGroupoid& x, const Integrand& f);

/// Functor given on objects and morphisms; validated on construction.
struct Functor {
  const FinGroupoid* source;
  const FinGroupoid* target;
  std::vector<int> on_objects, on_morphisms;

  Functor(const FinGroupoid& s, const FinGroupoid& t, std::vector<int> obj, std::vector<int> mor);
};

/// Homotopy fibre of F over y: objects (x, h: F(x) -> y); a morphism g: x -> x'
/// goes from (x, h) to (x', h o F(g)^-1).
struct HomotopyFiber {
  FinGroupoid groupoid;
  std::vector<int> base_object;  // x
  std::vector<int> path;         // h, a morphism of the target
  std::vector<int> base_morphism;  // g for each fibre morphism
};
HomotopyFiber homotopy_fiber(const Functor& f, int y);

/// Groupoid X//G for an action of G on objects 0..n-1; act(k, x) = k.x.
/// Morphism (x, k): x -> k.x has index x*|G| + k.
struct ActionGroupoid {
  GroupPtr group;
  FinGroupoid groupoid;
  std::vector<int> act_table;  // act_table[x*|G| + k] = k.x

  int morphism(int x, int k) const { return x * group->order() + k; }
  int element(int f) const { return f % group->order(); }
};
ActionGroupoid action_groupoid(const GroupPtr& g, int objects, const std::function<int(int k, int x)>& act);

/// Bun_G(T^n): commuting n-tuples with simultaneous conjugation k.t = k t k^-1.
class GaugeGroupoid {
 public:
  GaugeGroupoid(const GroupPtr& g, int n);

  const GroupPtr& group() const { return act_.group; }
  int dim() const { return n_; }
  const FinGroupoid& groupoid() const { return act_.groupoid; }
  const std::vector<int>& tuple(int object) const { return tuples_[object]; }
  /// Object index of a commuting tuple, or -1.
  int object_of(const std::vector<int>& t) const;
  int morphism(int object, int k) const { return act_.morphism(object, k); }
  int conjugator(int f) const { return act_.element(f); }

 private:
  int n_;
  ActionGroupoid act_;
  std::vector<std::vector<int>> tuples_;
  std::unordered_map<uint64_t, int> index_;
};

/// Maximum number of n-tuples scanned by GaugeGroupoid.
constexpr int64_t kGaugeTupleBudget = 1000000;

/// Functor Bun_H(T^n) -> Bun_G(T^n) induced by a homomorphism H -> G.
Functor induced_functor(const GroupHom& f, const GaugeGroupoid& source, const GaugeGroupoid& target);

}  // namespace dwkit
