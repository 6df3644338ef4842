#include <random>

#include "doctest.h"
#include "dwkit/cochain.hpp"
#include "dwkit/errors.hpp"
#include "helpers.hpp"

using namespace dwkit;
using dwkit_test::random_cochain;

namespace {

FormalChain random_chain(std::mt19937_64& rng, const GroupPtr& g, int n, int terms) {
  FormalChain z(g, n);
  std::uniform_int_distribution<int> el(0, g->order() - 1), co(-3, 3);
  for (int i = 0; i < terms; ++i) {
    std::vector<int> t(n);
    for (auto& x : t) x = el(rng);
    z.add(t, co(rng));
  }
  return z;
}

FormalChain single(const GroupPtr& g, const std::vector<int>& t, int64_t c = 1) {
  FormalChain z(g, static_cast<int>(t.size()));
  z.add(t, c);
  return z;
}

}  // namespace

TEST_CASE("coboundary squares to zero") {
  std::mt19937_64 rng(1);
  std::vector<GroupPtr> groups = {product_group({cyclic_group(2), cyclic_group(2)}), cyclic_group(4), dihedral_group(6),
                                  dihedral_group(8), pauli_group(), cyclic_group(16)};
  for (const auto& g : groups)
    for (int n = 1; n <= 3; ++n) {
      if (g->order() > 8 && n == 3) continue;
      int reps = g->order() <= 4 ? 50 : 5;
      for (int r = 0; r < reps; ++r) {
        Cochain c = random_cochain(rng, g, n, 12);
        CHECK(coboundary(coboundary(c)).is_zero());
      }
    }
}

TEST_CASE("parallel and serial coboundary agree") {
  std::mt19937_64 rng(2);
  GroupPtr g = pauli_group();
  Cochain c = random_cochain(rng, g, 2, 8);
  CHECK(coboundary(c, true) == coboundary(c, false));
}

TEST_CASE("coboundary of a 1-cochain by hand") {
  GroupPtr g = cyclic_group(3);
  Cochain c(g, 1, 3);
  c.set({1}, PhaseValue(1, 3));
  Cochain d = coboundary(c);
  // dc(a,b) = c(b) - c(a+b) + c(a)
  CHECK(d.at({1, 1}) == PhaseValue(1 - 0 + 1, 3));
  CHECK(d.at({1, 2}) == PhaseValue(0 - 0 + 1, 3));
  CHECK(d.at({2, 2}) == PhaseValue(0 - 1 + 0, 3));
}

TEST_CASE("catalog cocycles") {
  Cochain w1 = omega_zn_zn(2, 1);
  CHECK(is_cocycle(w1));
  // (1,0) has index 2, (0,1) index 1.
  CHECK(w1.at({2, 1}) == PhaseValue(1, 2));
  CHECK(w1.at({1, 2}) == PhaseValue(0, 1));
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k < n; ++k) {
      CHECK(is_cocycle(omega_zn_zn(n, k)));
      CHECK(is_cocycle(zn_cocycle3(n, k)));
    }
  Cochain d8 = d8_cocycle();
  CHECK(is_cocycle(d8));
  GroupPtr g = d8.group();
  CHECK(d8.at({g->element_by_name("b").value(), g->element_by_name("a").value()}) == PhaseValue(1, 4));
  for (int x = 0; x < g->order(); ++x) CHECK(d8.at({x, 0}).is_zero());
  CHECK_THROWS_AS(catalog_cocycle("nope", {}), UnknownFamily);
  CHECK(catalog_cocycle("omega", {3, 2}) == omega_zn_zn(3, 2));
}

TEST_CASE("cochain sets are normalized and widen the modulus") {
  GroupPtr g = cyclic_group(4);
  Cochain c(g, 2, 2);
  c.set({1, 2}, PhaseValue(1, 2));
  c.set({3, 3}, PhaseValue(1, 3));
  CHECK(c.modulus() == 6);
  CHECK(c.at({1, 2}) == PhaseValue(1, 2));
  CHECK(c.denominator() == 6);
  CHECK_THROWS(c.set({0, 1}, PhaseValue(1, 2)));
  CHECK(c.rescaled(12) == c);
}

TEST_CASE("shuffle product") {
  GroupPtr g = cyclic_group(4);
  FormalChain xy = shuffle_cross(single(g, {1}), single(g, {2}));
  FormalChain want(g, 2);
  want.add({1, 2}, 1);
  want.add({2, 1}, -1);
  CHECK(xy == want);

  FormalChain unit(g, 0);
  unit.add(std::vector<int>{}, 1);
  FormalChain a = single(g, {3, 1});
  CHECK(shuffle_cross(a, unit) == a);
  CHECK(shuffle_cross(unit, a) == a);

  // Leibniz on an abelian group: d(a x b) = da x b + (-1)^p a x db.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    int p = 1 + trial % 2, q = 1 + (trial / 2) % 2;
    FormalChain u = random_chain(rng, g, p, 3), v = random_chain(rng, g, q, 3);
    FormalChain lhs = boundary(shuffle_cross(u, v));
    FormalChain rhs = shuffle_cross(boundary(u), v);
    rhs.add(shuffle_cross(u, boundary(v)), p % 2 ? -1 : 1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("torus fundamental cycles") {
  GroupPtr z = product_group({cyclic_group(2), cyclic_group(2)});
  CHECK(torus_fundamental_cycle(z, {3}) == single(z, {3}));
  FormalChain t2 = torus_fundamental_cycle(z, {2, 1});
  FormalChain want(z, 2);
  want.add({2, 1}, 1);
  want.add({1, 2}, -1);
  CHECK(t2 == want);

  GroupPtr s3 = dihedral_group(6);
  for (int a = 1; a < 6; ++a)
    for (int b = 1; b < 6; ++b)
      for (int c = 1; c < 6; ++c) {
        if (!s3->commute(a, b) || !s3->commute(b, c) || !s3->commute(a, c)) continue;
        FormalChain t3 = torus_fundamental_cycle(s3, {a, b, c});
        CHECK(boundary(t3).is_zero());
        if (a != b && b != c && a != c) CHECK(t3.terms().size() == 6);
      }
  GroupPtr cube = product_group({cyclic_group(2), cyclic_group(2), cyclic_group(2)});
  FormalChain t3 = torus_fundamental_cycle(cube, {4, 2, 1});
  CHECK(t3.terms().size() == 6);
  CHECK(t3.terms().at({4, 2, 1}) == 1);
  CHECK(t3.terms().at({2, 4, 1}) == -1);
  CHECK(t3.terms().at({2, 1, 4}) == 1);
  CHECK(boundary(t3).is_zero());
  int a = s3->element_by_name("a").value(), b = s3->element_by_name("b").value();
  CHECK_THROWS_AS(torus_fundamental_cycle(s3, {a, b}), NonCommuting);
}

TEST_CASE("evaluate") {
  Cochain w1 = omega_zn_zn(2, 1);
  GroupPtr g = w1.group();
  CHECK(evaluate(w1, FormalChain(g, 2)).is_zero());
  CHECK(evaluate(w1, torus_fundamental_cycle(g, {2, 1})) == PhaseValue(1, 2));
  CHECK(evaluate(Cochain(g, 2), torus_fundamental_cycle(g, {2, 1})).is_zero());
  CHECK_THROWS_AS(evaluate(w1, FormalChain(g, 3)), DegreeMismatch);
}

TEST_CASE("evaluate is adjoint to the boundary") {
  std::mt19937_64 rng(4);
  std::vector<GroupPtr> groups = {dihedral_group(6), cyclic_group(5), dihedral_group(8)};
  for (const auto& g : groups)
    for (int n = 1; n <= 3; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        Cochain c = random_cochain(rng, g, n, 7);
        FormalChain z = random_chain(rng, g, n + 1, 6);
        CHECK(evaluate(c, boundary(z)) == evaluate(coboundary(c), z));
      }
}

TEST_CASE("torus evaluation under the mapping class group") {
  // For a cocycle, the rotation (g1..gn) -> (g2..gn, g1^{(-1)^{n-1}}) is an
  // orientation-preserving torus diffeomorphism and fixes the value; the plain
  // rotation multiplies it by the sign of the cyclic permutation.
  std::vector<Cochain> cocycles = {omega_zn_zn(2, 1), omega_zn_zn(2, 0), d8_cocycle(), zn_cocycle3(2, 1),
                                   zn_cocycle3(4, 3)};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    GroupPtr s3 = dihedral_group(6);
    Cochain b = random_cochain(rng, s3, 2, 6);
    cocycles.push_back(coboundary(b));
  }
  for (const auto& c : cocycles) {
    const GroupPtr& g = c.group();
    const int n = c.degree();
    std::vector<int> t(n, 0);
    for (;;) {
      bool commuting = true;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) commuting &= g->commute(t[i], t[j]);
      if (commuting) {
        PhaseValue v = evaluate(c, torus_fundamental_cycle(g, t));
        std::vector<int> r(t.begin() + 1, t.end());
        r.push_back(t[0]);
        PhaseValue rot = evaluate(c, torus_fundamental_cycle(g, r));
        CHECK(rot == (n % 2 ? v : PhaseValue(0, 1) - v));
        if (n % 2 == 0) r.back() = g->inv(t[0]);
        CHECK(evaluate(c, torus_fundamental_cycle(g, r)) == v);
      }
      int k = 0;
      while (k < n && ++t[k] == g->order()) t[k++] = 0;
      if (k == n) break;
    }
  }
}

TEST_CASE("prism is a chain homotopy from the identity to conjugation") {
  std::mt19937_64 rng(6);
  GroupPtr g = dihedral_group(8);
  for (int n = 0; n <= 3; ++n)
    for (int eta = 0; eta < g->order(); ++eta) {
      FormalChain z = n ? random_chain(rng, g, n, 4) : single(g, {});
      FormalChain lhs = boundary(prism(z, eta));
      if (n) lhs.add(prism(boundary(z), eta));
      std::vector<int> conj(g->order());
      for (int x = 0; x < g->order(); ++x) conj[x] = g->mul(g->mul(g->inv(eta), x), eta);
      FormalChain rhs = map_chain(z, g, conj);
      rhs.add(z, -1);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("prism pairing agrees with evaluating against the prism") {
  std::mt19937_64 rng(7);
  GroupPtr g = dihedral_group(8);
  Cochain w = random_cochain(rng, g, 3, 8);
  std::vector<int> id(g->order());
  for (int x = 0; x < g->order(); ++x) id[x] = x;
  for (int eta = 0; eta < g->order(); ++eta) {
    Cochain p = prism_pairing(w, eta, g, id);
    for (int x = 1; x < 8; ++x)
      for (int y = 1; y < 8; ++y) CHECK(p.at({x, y}) == evaluate(w, prism(single(g, {x, y}), eta)));
  }
}

TEST_CASE("interval pairing measures failure of conjugation invariance") {
  // On G itself with iota = id: d Phi_g = w - (x -> g^-1 x g)^* w.
  GroupPtr g = pauli_group();
  GroupHom id = GroupHom::identity(g);
  Cochain w(g, 2);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    Cochain c = coboundary(random_cochain(rng, g, 2, 4));
    for (int eta = 0; eta < g->order(); ++eta) {
      std::vector<int> m(g->order());
      for (int x = 0; x < g->order(); ++x) m[x] = g->mul(g->mul(g->inv(eta), x), eta);
      Cochain phi = interval_pairing(c, eta, id);
      CHECK(coboundary(phi) == c - pullback(GroupHom(g, g, m), c));
    }
  }
  CHECK(interval_pairing(w, 0, id).is_zero());
}

TEST_CASE("pullback") {
  std::mt19937_64 rng(9);
  GroupPtr g = dihedral_group(8);
  Cochain c = random_cochain(rng, g, 2, 4);
  CHECK(pullback(GroupHom::identity(g), c) == c);
  GroupPtr z2 = cyclic_group(2);
  GroupHom triv(z2, g, {0, 0});
  CHECK(pullback(triv, c).is_zero());
  // Cochain map property along the quotient Z4 -> Z2 and the inclusion Z2 -> D8.
  GroupHom q(cyclic_group(4), z2, {0, 1, 0, 1});
  Cochain e = random_cochain(rng, z2, 2, 2);
  CHECK(coboundary(pullback(q, e)) == pullback(q, coboundary(e)));
  GroupHom inc(z2, g, {0, g->element_by_name("b").value()});
  CHECK(coboundary(pullback(inc, c)) == pullback(inc, coboundary(c)));
}

TEST_CASE("restriction of the Z_NM 3-cocycle to Z_N") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      std::vector<int> map(n);
      for (int a = 0; a < n; ++a) map[a] = a * m;
      GroupHom iota(cyclic_group(n), cyclic_group(n * m), map);
      for (int k = 0; k < n; ++k) CHECK(pullback(iota, zn_cocycle3(n * m, k)) == zn_cocycle3(n, k));
    }
}

TEST_CASE("tuple index round trip") {
  GroupPtr g = dihedral_group(6);
  for (int n = 0; n <= 3; ++n) {
    TupleIndex ix(*g, n);
    int64_t expect = 1;
    for (int i = 0; i < n; ++i) expect *= 5;
    CHECK(ix.count() == expect);
    std::vector<int> t(n);
    for (int64_t i = 0; i < ix.count(); ++i) {
      ix.tuple(i, t.data());
      CHECK(ix.index(t.data()) == i);
    }
  }
}
