#pragma once

// Random finite groupoids and functors between them, shared by the groupoid
// unit tests and the acceptance binary.

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <vector>

#include "dwkit/groupoid.hpp"

namespace dwkit_test {

using namespace dwkit;

// Random groupoid as a disjoint union of components (objects c_i) x (group H_i),
// morphisms (a, b, h) for objects a, b of one component.
struct Component {
  GroupPtr h;
  int first, size;
};

struct RandomGroupoid {
  FinGroupoid groupoid;
  std::vector<Component> comps;
  std::vector<int> comp_of;              // object -> component
  std::vector<std::array<int, 3>> mors;  // (a, b, h)
  std::map<std::array<int, 3>, int> index;

  int morphism(int a, int b, int h) const { return index.at({a, b, h}); }
};

inline RandomGroupoid build(const std::vector<std::pair<GroupPtr, int>>& spec) {
  RandomGroupoid out;
  int objects = 0;
  for (size_t i = 0; i < spec.size(); ++i) {
    out.comps.push_back({spec[i].first, objects, spec[i].second});
    for (int j = 0; j < spec[i].second; ++j) out.comp_of.push_back(static_cast<int>(i));
    objects += spec[i].second;
  }
  std::vector<int> src, dst, ids(objects);
  for (const auto& c : out.comps)
    for (int a = c.first; a < c.first + c.size; ++a)
      for (int b = c.first; b < c.first + c.size; ++b)
        for (int h = 0; h < c.h->order(); ++h) {
          int idx = static_cast<int>(out.mors.size());
          out.index[{a, b, h}] = idx;
          out.mors.push_back({a, b, h});
          src.push_back(a);
          dst.push_back(b);
          if (a == b && h == c.h->identity()) ids[a] = idx;
        }
  auto mors = out.mors;
  auto index = out.index;
  auto comps = out.comps;
  auto comp_of = out.comp_of;
  auto compose = [=](int g, int f) {
    const auto& G = *comps[comp_of[mors[f][0]]].h;
    return index.at({mors[f][0], mors[g][1], G.mul(mors[g][2], mors[f][2])});
  };
  auto inverse = [=](int f) {
    const auto& G = *comps[comp_of[mors[f][0]]].h;
    return index.at({mors[f][1], mors[f][0], G.inv(mors[f][2])});
  };
  out.groupoid = FinGroupoid(objects, src, dst, ids, compose, inverse);
  return out;
}

inline std::vector<std::pair<GroupPtr, int>> random_spec(std::mt19937_64& rng, int max_objects) {
  static const std::vector<GroupPtr> pool = {dwkit::cyclic_group(1), cyclic_group(2), cyclic_group(3), cyclic_group(4),
                                             dihedral_group(6)};
  std::vector<std::pair<GroupPtr, int>> spec;
  int k = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < k; ++i)
    spec.push_back({pool[rng() % pool.size()], 1 + static_cast<int>(rng() % std::max(1, max_objects / k))});
  return spec;
}

inline RandomGroupoid make_random(std::mt19937_64& rng, int max_objects) { return build(random_spec(rng, max_objects)); }

// Random functor: each source component goes to a random target component
// through the trivial homomorphism or, when orders allow, a cyclic reduction.
inline Functor random_functor(std::mt19937_64& rng, const RandomGroupoid& s, const RandomGroupoid& t) {
  std::vector<int> obj(s.groupoid.object_count()), mor(s.groupoid.morphism_count());
  std::vector<std::vector<int>> hom(s.comps.size());
  std::vector<std::vector<int>> twist(s.groupoid.object_count());
  for (size_t i = 0; i < s.comps.size(); ++i) {
    const auto& c = s.comps[i];
    const auto& d = t.comps[rng() % t.comps.size()];
    std::vector<int> phi(c.h->order(), d.h->identity());
    // Z_a -> Z_b, x -> x mod b, when b divides a.
    bool cyc = c.h->is_abelian() && d.h->is_abelian() && c.h->order() > 1 && d.h->order() > 1;
    if (cyc && rng() % 2 && c.h->order() % d.h->order() == 0)
      for (int x = 0; x < c.h->order(); ++x) phi[x] = x % d.h->order();
    hom[i] = phi;
    for (int a = c.first; a < c.first + c.size; ++a) {
      obj[a] = d.first + static_cast<int>(rng() % d.size);
      twist[a] = {static_cast<int>(rng() % d.h->order())};
    }
  }
  for (int f = 0; f < s.groupoid.morphism_count(); ++f) {
    auto [a, b, h] = s.mors[f];
    const auto& D = *t.comps[t.comp_of[obj[a]]].h;
    // (a, b, h) -> (F a, F b, t_b phi(h) t_a^-1)
    int img = D.mul(D.mul(twist[b][0], hom[s.comp_of[a]][h]), D.inv(twist[a][0]));
    mor[f] = t.morphism(obj[a], obj[b], img);
  }
  return Functor(s.groupoid, t.groupoid, obj, mor);
}

}  // namespace dwkit_test
