#include <array>
#include <map>
#include <random>

#include "doctest.h"
#include "dwkit/errors.hpp"
#include "dwkit/groupoid.hpp"
#include "random_groupoids.hpp"

using namespace dwkit;
using namespace dwkit_test;

namespace {

GroupPtr trivial() { return cyclic_group(1); }

ActionGroupoid point_mod(const GroupPtr& g) {
  return action_groupoid(g, 1, [](int, int) { return 0; });
}

}  // namespace

TEST_CASE("cardinality basics") {
  CHECK(cardinality(point_mod(dihedral_group(6)).groupoid) == Rational(1, 6));
  auto two = action_groupoid(trivial(), 2, [](int, int x) { return x; });
  CHECK(cardinality(two.groupoid) == Rational(2));
  GaugeGroupoid s3(dihedral_group(6), 1);
  CHECK(cardinality(s3.groupoid()) == Rational(1));
  CHECK(s3.groupoid().verify());
}

TEST_CASE("EG covers the point with fibre G") {
  for (auto g : {cyclic_group(4), dihedral_group(8), pauli_group()}) {
    auto eg = action_groupoid(g, g->order(), [&](int k, int x) { return g->mul(k, x); });
    CHECK(eg.groupoid.verify());
    CHECK(cardinality(eg.groupoid) == Rational(g->order()) * cardinality(point_mod(g).groupoid));
    CHECK(cardinality(eg.groupoid) == Rational(1));
  }
}

TEST_CASE("gauge groupoids") {
  for (auto g : {cyclic_group(4), product_group({cyclic_group(2), cyclic_group(2)})})
    for (int n = 1; n <= 3; ++n) {
      GaugeGroupoid b(g, n);
      int64_t p = 1;
      for (int i = 0; i < n; ++i) p *= g->order();
      CHECK(b.groupoid().object_count() == p);
      CHECK(cardinality(b.groupoid()) == Rational(p / g->order()));
    }
  GaugeGroupoid s2(dihedral_group(6), 2), s3(dihedral_group(6), 3);
  CHECK(s2.groupoid().object_count() == 18);
  CHECK(cardinality(s2.groupoid()) == Rational(3));
  CHECK(s3.groupoid().object_count() == 48);
  CHECK(cardinality(s3.groupoid()) == Rational(8));
  CHECK(s2.groupoid().verify());
  // Aut(tuple) is the joint centralizer.
  const auto& g = *s2.group();
  for (int x = 0; x < s2.groupoid().object_count(); ++x) {
    int c = 0;
    for (int k = 0; k < 6; ++k) c += g.conj(k, s2.tuple(x)[0]) == s2.tuple(x)[0] && g.conj(k, s2.tuple(x)[1]) == s2.tuple(x)[1];
    CHECK(s2.groupoid().automorphism_count(x) == c);
  }
  CHECK_THROWS_AS(GaugeGroupoid(pauli_group(), 5), BudgetExceeded);
}

TEST_CASE("integration") {
  GaugeGroupoid b(dihedral_group(6), 1);
  const auto& X = b.groupoid();
  auto one = integrate(X, [](int) { return Cyclotomic::rational(Rational(1)); });
  CHECK(one == Cyclotomic::rational(cardinality(X)));
  // Indicator of the class of the identity.
  auto delta = integrate(X, [&](int x) { return Cyclotomic::rational(Rational(b.tuple(x)[0] == 0 ? 1 : 0)); });
  CHECK(delta == Cyclotomic::rational(Rational(1, 6)));
  CHECK_THROWS_AS(integrate(X, [](int x) { return Cyclotomic::rational(Rational(x)); }), NotGaugeInvariant);
}

TEST_CASE("homotopy fibres") {
  GroupPtr g = dihedral_group(6);
  auto pt = point_mod(g);
  std::vector<int> mors(g->order());
  for (int k = 0; k < g->order(); ++k) mors[k] = k;
  Functor id(pt.groupoid, pt.groupoid, {0}, mors);
  auto fib = homotopy_fiber(id, 0);
  CHECK(fib.groupoid.verify());
  CHECK(cardinality(fib.groupoid) == Rational(1));
  CHECK(fib.groupoid.representatives().size() == 1);

  // Reduction Z4 -> Z2 on Bun(T^1).
  GroupPtr z4 = cyclic_group(4), z2 = cyclic_group(2);
  GaugeGroupoid up(z4, 1), down(z2, 1);
  Functor red = induced_functor(GroupHom(z4, z2, {0, 1, 0, 1}), up, down);
  Rational total(0);
  for (int y = 0; y < down.groupoid().object_count(); ++y) {
    auto f = homotopy_fiber(red, y);
    CHECK(f.groupoid.verify());
    CHECK(cardinality(f.groupoid) == Rational(1));
    total += cardinality(f.groupoid) / Rational(down.groupoid().automorphism_count(y));
  }
  CHECK(total == cardinality(up.groupoid()));

  // Object outside the essential image: Z2 -> Z4 by inclusion misses 1 and 3.
  Functor inc = induced_functor(GroupHom(z2, z4, {0, 2}), down, up);
  CHECK(homotopy_fiber(inc, up.object_of({1})).groupoid.object_count() == 0);
  CHECK(cardinality(homotopy_fiber(inc, up.object_of({1})).groupoid) == Rational(0));
}

TEST_CASE("Cavalieri along reduction mod 2") {
  GroupPtr z4 = cyclic_group(4), z2 = cyclic_group(2);
  GaugeGroupoid up(z4, 1), down(z2, 1);
  Functor red = induced_functor(GroupHom(z4, z2, {0, 1, 0, 1}), up, down);
  auto f = [&](int x) { return Cyclotomic::phase(PhaseValue(up.tuple(x)[0], 4)); };
  auto lhs = integrate(up.groupoid(), f);
  auto rhs = integrate(down.groupoid(), [&](int y) {
    auto fib = homotopy_fiber(red, y);
    return integrate(fib.groupoid, [&](int o) { return f(fib.base_object[o]); });
  });
  CHECK(lhs == rhs);
}

TEST_CASE("generalized Cavalieri on random functors") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    RandomGroupoid s = make_random(rng, 12), t = make_random(rng, 10);
    REQUIRE(s.groupoid.verify());
    Functor F = random_functor(rng, s, t);
    // Gauge-invariant integrand: a phase depending on the component.
    std::vector<PhaseValue> w;
    for (size_t i = 0; i < s.comps.size(); ++i) w.push_back(PhaseValue(rng() % 6, 6));
    auto f = [&](int x) { return Cyclotomic::phase(w[s.comp_of[x]], Rational(1 + s.comp_of[x])); };
    auto lhs = integrate(s.groupoid, f);
    auto rhs = integrate(t.groupoid, [&](int y) {
      auto fib = homotopy_fiber(F, y);
      return integrate(fib.groupoid, [&](int o) { return f(fib.base_object[o]); });
    });
    CHECK(lhs == rhs);
  }
}

TEST_CASE("equivalent groupoids have equal cardinality") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    auto spec = random_spec(rng, 8);
    auto dup = spec;
    for (auto& [h, size] : dup) size += static_cast<int>(rng() % 3);
    RandomGroupoid a = build(spec), b = build(dup);
    // Collapse duplicated objects onto the first object of each component.
    std::vector<int> obj(b.groupoid.object_count()), mor(b.groupoid.morphism_count());
    for (int x = 0; x < b.groupoid.object_count(); ++x) obj[x] = a.comps[b.comp_of[x]].first;
    for (int f = 0; f < b.groupoid.morphism_count(); ++f) {
      auto [u, v, h] = b.mors[f];
      mor[f] = a.morphism(obj[u], obj[v], h);
    }
    Functor collapse(b.groupoid, a.groupoid, obj, mor);
    CHECK(cardinality(a.groupoid) == cardinality(b.groupoid));
    Rational direct(0);
    for (const auto& c : a.comps) direct += Rational(1, c.h->order());
    CHECK(cardinality(a.groupoid) == direct);
  }
}
