#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance binary.  They deliberately avoid the library's torus machinery.

#include <string>
#include <utility>
#include <vector>

#include "dwkit/cochain.hpp"

namespace dwkit_test {

using dwkit::Cochain;
using dwkit::GroupPtr;
using dwkit::PhaseValue;

/// Builtin groups of order <= 16 with a display name.
inline std::vector<std::pair<std::string, GroupPtr>> small_builtin_groups() {
  using namespace dwkit;
  std::vector<std::pair<std::string, GroupPtr>> out;
  for (int n = 1; n <= 16; ++n) out.emplace_back("Z" + std::to_string(n), cyclic_group(n));
  for (int n = 4; n <= 16; n += 2) out.emplace_back("D" + std::to_string(n), dihedral_group(n));
  auto z = [](int n) { return cyclic_group(n); };
  out.emplace_back("Z2xZ2", product_group({z(2), z(2)}));
  out.emplace_back("Z2xZ4", product_group({z(2), z(4)}));
  out.emplace_back("Z2xZ2xZ2", product_group({z(2), z(2), z(2)}));
  out.emplace_back("Z3xZ3", product_group({z(3), z(3)}));
  out.emplace_back("Z2xZ6", product_group({z(2), z(6)}));
  out.emplace_back("Z4xZ4", product_group({z(4), z(4)}));
  out.emplace_back("Z2xZ8", product_group({z(2), z(8)}));
  out.emplace_back("Z2xZ2xZ4", product_group({z(2), z(2), z(4)}));
  out.emplace_back("Z2^4", product_group({z(2), z(2), z(2), z(2)}));
  out.emplace_back("Z2xD8", product_group({z(2), dihedral_group(8)}));
  out.emplace_back("P1", pauli_group());
  return out;
}

/// Number of commuting n-tuples by scanning G^n.
inline int64_t commuting_tuples(const GroupPtr& g, int n) {
  const int order = g->order();
  std::vector<int> t(n, 0);
  int64_t count = 0;
  while (true) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = g->commute(t[i], t[j]);
    count += ok;
    int i = n - 1;
    while (i >= 0 && ++t[i] == order) t[i--] = 0;
    if (i < 0) break;
  }
  return count;
}

/// Conjugacy classes of the subgroup `h` (sorted element list) of g.
inline int subgroup_class_count(const GroupPtr& g, const std::vector<int>& h,
                                const std::vector<bool>& keep) {
  std::vector<bool> seen(g->order(), false);
  int count = 0;
  for (int x : h) {
    if (seen[x]) continue;
    for (int k : h) seen[g->conj(k, x)] = true;
    count += keep[x];
  }
  return count;
}

/// Number of omega-regular conjugacy classes: g is regular iff
/// omega(g,h) = omega(h,g) for every h in its centralizer.
inline int64_t regular_class_count(const GroupPtr& g, const Cochain& omega) {
  std::vector<int> all(g->order());
  std::vector<bool> regular(g->order(), true);
  for (int x = 0; x < g->order(); ++x) {
    all[x] = x;
    for (int h : g->centralizer(x)) regular[x] = regular[x] && omega.at({x, h}) == omega.at({h, x});
  }
  return subgroup_class_count(g, all, regular);
}

/// beta_a(x, y) for the twisted double, written additively.
inline PhaseValue dpr_beta(const Cochain& theta, int a, int x, int y) {
  const auto& G = *theta.group();
  const int xy = G.mul(x, y);
  return theta.at({a, x, y}) - theta.at({x, G.mul(G.mul(G.inv(x), a), x), y}) +
         theta.at({x, y, G.mul(G.mul(G.inv(xy), a), xy)});
}

/// Simple objects of the twisted double: sum over classes [a] of the number of
/// beta_a-regular classes of the centralizer of a.
inline int64_t double_oracle(const GroupPtr& g, const Cochain& theta) {
  int64_t total = 0;
  for (const auto& cls : g->conjugacy_classes()) {
    const int a = cls.front();
    std::vector<int> c = g->centralizer(a);
    std::vector<bool> regular(g->order(), false);
    for (int x : c) {
      bool ok = true;
      for (int h : c)
        if (g->commute(x, h)) ok = ok && dpr_beta(theta, a, x, h) == dpr_beta(theta, a, h, x);
      regular[x] = ok;
    }
    total += subgroup_class_count(g, c, regular);
  }
  return total;
}

}  // namespace dwkit_test
