#include "dwkit/group.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "dwkit/errors.hpp"

namespace dwkit {

namespace {

std::string fnv1a_hex(const std::vector<int32_t>& table, int order) {
  uint64_t h = 1469598103934665603ULL;
  auto feed = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ULL;
    }
  };
  feed(static_cast<uint32_t>(order));
  for (int32_t x : table) feed(static_cast<uint32_t>(x));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(int order, const std::vector<std::vector<int>>& table,
                                    std::string label) {
  if (order <= 0) throw NotAGroup("order must be positive", {-1, -1, -1});
  if (static_cast<int>(table.size()) != order) throw NotAGroup("table has wrong row count", {-1, -1, -1});
  FiniteGroup g;
  g.order_ = order;
  g.label_ = std::move(label);
  g.table_.resize(static_cast<size_t>(order) * order);
  for (int a = 0; a < order; ++a) {
    if (static_cast<int>(table[a].size()) != order)
      throw NotAGroup("row " + std::to_string(a) + " has wrong length", {a, -1, -1});
    for (int b = 0; b < order; ++b) {
      int v = table[a][b];
      if (v < 0 || v >= order) throw NotAGroup("entry out of range", {a, b, -1});
      g.table_[static_cast<size_t>(a) * order + b] = v;
    }
  }
  // Latin square.
  std::vector<int> seen(order);
  for (int a = 0; a < order; ++a) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int b = 0; b < order; ++b) {
      int v = g.mul(a, b);
      if (seen[v] >= 0)
        throw NotAGroup("row " + std::to_string(a) + " is not a permutation", {a, seen[v], b});
      seen[v] = b;
    }
  }
  for (int b = 0; b < order; ++b) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int a = 0; a < order; ++a) {
      int v = g.mul(a, b);
      if (seen[v] >= 0)
        throw NotAGroup("column " + std::to_string(b) + " is not a permutation", {seen[v], a, b});
      seen[v] = a;
    }
  }
  // Identity: an idempotent that is a two-sided unit.
  int e = -1;
  for (int c = 0; c < order && e < 0; ++c) {
    if (g.mul(c, c) != c) continue;
    bool ok = true;
    for (int a = 0; a < order && ok; ++a) ok = g.mul(c, a) == a && g.mul(a, c) == a;
    if (ok) e = c;
  }
  if (e < 0) throw NotAGroup("no identity element", {-1, -1, -1});
  g.identity_ = e;
  g.inverses_.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (g.mul(a, b) == e) g.inverses_[a] = b;
    if (g.mul(g.inverses_[a], a) != e) throw NotAGroup("left and right inverses differ", {a, -1, -1});
  }
  auto check = [&](int a, int b, int c) {
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
      throw NotAGroup("associativity fails", {a, b, c});
  };
  if (order <= 64) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> pick(0, order - 1);
    for (int i = 0; i < 1000; ++i) check(pick(rng), pick(rng), pick(rng));
    // Light's test on a generating set: the elements s with (xs)y = x(sy) for
    // all x, y form a submagma, so checking generators suffices.
    std::vector<int> all(order);
    std::iota(all.begin(), all.end(), 0);
    for (int s : g.generators_of(all))
      for (int x = 0; x < order; ++x)
        for (int y = 0; y < order; ++y) check(x, s, y);
  }
  std::vector<std::string> names(order);
  for (int a = 0; a < order; ++a) names[a] = std::to_string(a);
  g.names_ = std::move(names);
  g.hash_ = fnv1a_hex(g.table_, order);
  return g;
}

void FiniteGroup::set_names(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != order_) throw Error("element name count mismatch");
  names_ = std::move(names);
}

std::optional<int> FiniteGroup::element_by_name(const std::string& name) const {
  for (int a = 0; a < order_; ++a)
    if (names_[a] == name) return a;
  if (!name.empty() && std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    long v = std::stol(name);
    if (v >= 0 && v < order_) return static_cast<int>(v);
  }
  return std::nullopt;
}

std::vector<int> FiniteGroup::centralizer(int g) const {
  std::vector<int> out;
  for (int h = 0; h < order_; ++h)
    if (commute(g, h)) out.push_back(h);
  return out;
}

std::vector<int> FiniteGroup::center() const {
  std::vector<int> out;
  for (int g = 0; g < order_; ++g) {
    bool central = true;
    for (int h = 0; h < order_ && central; ++h) central = commute(g, h);
    if (central) out.push_back(g);
  }
  return out;
}

std::vector<std::vector<int>> FiniteGroup::conjugacy_classes() const {
  std::vector<int> cls(order_, -1);
  std::vector<std::vector<int>> out;
  for (int g = 0; g < order_; ++g) {
    if (cls[g] >= 0) continue;
    std::vector<int> c;
    for (int k = 0; k < order_; ++k) {
      int x = conj(k, g);
      if (cls[x] < 0) {
        cls[x] = static_cast<int>(out.size());
        c.push_back(x);
      }
    }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> FiniteGroup::closure(const std::vector<int>& gens) const {
  std::vector<char> in(order_, 0);
  std::vector<int> elems{identity_};
  in[identity_] = 1;
  for (size_t i = 0; i < elems.size(); ++i)
    for (int s : gens) {
      int x = mul(elems[i], s);
      if (!in[x]) {
        in[x] = 1;
        elems.push_back(x);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

std::vector<int> FiniteGroup::generators_of(const std::vector<int>& elems) const {
  std::vector<int> gens;
  std::vector<char> in(order_, 0);
  in[identity_] = 1;
  for (int x : elems) {
    if (in[x]) continue;
    gens.push_back(x);
    for (int y : closure(gens)) in[y] = 1;
  }
  return gens;
}

int FiniteGroup::element_order(int g) const {
  int k = 1;
  for (int x = g; x != identity_; x = mul(x, g)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (!commute(a, b)) return false;
  return true;
}

GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

GroupPtr cyclic_group(int n) {
  if (n <= 0) throw UnknownBuiltin("cyclic(" + std::to_string(n) + ")");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  FiniteGroup g = FiniteGroup::from_table(n, t, "Z" + std::to_string(n));
  g.set_builtin({"cyclic", n, {}});
  return make_group(std::move(g));
}

GroupPtr product_group(const std::vector<GroupPtr>& factors) {
  if (factors.empty()) throw UnknownBuiltin("product of no factors");
  int order = 1;
  for (const auto& f : factors) order *= f->order();
  std::vector<int> radix(factors.size());
  // First factor is most significant.
  int r = 1;
  for (size_t i = factors.size(); i-- > 0;) {
    radix[i] = r;
    r *= factors[i]->order();
  }
  auto digit = [&](int x, size_t i) { return (x / radix[i]) % factors[i]->order(); };
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      int v = 0;
      for (size_t i = 0; i < factors.size(); ++i) v += factors[i]->mul(digit(a, i), digit(b, i)) * radix[i];
      t[a][b] = v;
    }
  std::string label;
  BuiltinSpec spec{"product", 0, {}};
  bool all_builtin = true;
  for (size_t i = 0; i < factors.size(); ++i) {
    label += (i ? "x" : "") + factors[i]->label();
    if (factors[i]->builtin()) spec.factors.push_back(*factors[i]->builtin());
    else all_builtin = false;
  }
  FiniteGroup g = FiniteGroup::from_table(order, t, label);
  std::vector<std::string> names(order);
  for (int a = 0; a < order; ++a)
    for (size_t i = 0; i < factors.size(); ++i)
      names[a] += (i ? "," : "") + factors[i]->element_name(digit(a, i));
  g.set_names(std::move(names));
  if (all_builtin) g.set_builtin(spec);
  return make_group(std::move(g));
}

namespace {

std::string dihedral_name(int i, int j) {
  if (i == 0 && j == 0) return "e";
  std::string s;
  if (i == 1) s = "a";
  else if (i > 1) s = "a^" + std::to_string(i);
  if (j) s += "b";
  return s;
}

}  // namespace

GroupPtr dihedral_group(int two_n) {
  if (two_n < 2 || two_n % 2) throw UnknownBuiltin("dihedral(" + std::to_string(two_n) + ")");
  int n = two_n / 2;
  std::vector<std::vector<int>> t(two_n, std::vector<int>(two_n));
  for (int x = 0; x < two_n; ++x)
    for (int y = 0; y < two_n; ++y) {
      int i = x % n, j = x / n, k = y % n, l = y / n;
      // a^i b^j a^k b^l = a^{i + (-1)^j k} b^{j+l}
      int e = ((i + (j ? -k : k)) % n + n) % n;
      t[x][y] = e + n * ((j + l) % 2);
    }
  FiniteGroup g = FiniteGroup::from_table(two_n, t, "D" + std::to_string(two_n));
  std::vector<std::string> names(two_n);
  for (int x = 0; x < two_n; ++x) names[x] = dihedral_name(x % n, x / n);
  g.set_names(std::move(names));
  g.set_builtin({"dihedral", two_n, {}});
  return make_group(std::move(g));
}

GroupPtr pauli_group() {
  GroupPtr d8 = dihedral_group(8);
  const int a = 1;
  auto alpha = [&](int k, int d) { return k ? d8->conj(a, d) : d; };
  std::vector<std::vector<int>> t(16, std::vector<int>(16));
  for (int x = 0; x < 16; ++x)
    for (int y = 0; y < 16; ++y) {
      int d1 = x % 8, k1 = x / 8, d2 = y % 8, k2 = y / 8;
      // (d1, k1)(d2, k2) = (d1 alpha^{k1}(d2), k1 + k2)
      t[x][y] = d8->mul(d1, alpha(k1, d2)) + 8 * ((k1 + k2) % 2);
    }
  FiniteGroup g = FiniteGroup::from_table(16, t, "P1");
  std::vector<std::string> names(16);
  for (int x = 0; x < 16; ++x) {
    const std::string& dn = d8->element_name(x % 8);
    names[x] = x / 8 == 0 ? dn : (x % 8 == 0 ? "x" : dn + "x");
  }
  g.set_names(std::move(names));
  g.set_builtin({"pauli", 0, {}});
  return make_group(std::move(g));
}

GroupPtr builtin_group(const BuiltinSpec& spec) {
  if (spec.name == "cyclic") return cyclic_group(spec.n);
  if (spec.name == "dihedral") return dihedral_group(spec.n);
  if (spec.name == "pauli") return pauli_group();
  if (spec.name == "product") {
    std::vector<GroupPtr> fs;
    for (const auto& f : spec.factors) fs.push_back(builtin_group(f));
    return product_group(fs);
  }
  throw UnknownBuiltin(spec.name);
}

GroupHom::GroupHom(GroupPtr source, GroupPtr target, std::vector<int> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  const int n = source_->order();
  if (static_cast<int>(map_.size()) != n) throw Error("homomorphism map has wrong length");
  for (int x : map_)
    if (x < 0 || x >= target_->order()) throw Error("homomorphism image out of range");
  if (map_[source_->identity()] != target_->identity()) throw Error("homomorphism does not fix identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (map_[source_->mul(a, b)] != target_->mul(map_[a], map_[b]))
        throw Error("map is not a homomorphism at (" + std::to_string(a) + "," + std::to_string(b) + ")");
}

bool GroupHom::injective() const { return kernel().size() == 1; }

bool GroupHom::surjective() const {
  std::vector<char> hit(target_->order(), 0);
  for (int x : map_) hit[x] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
}

std::vector<int> GroupHom::kernel() const {
  std::vector<int> out;
  for (int a = 0; a < source_->order(); ++a)
    if (map_[a] == target_->identity()) out.push_back(a);
  return out;
}

GroupHom GroupHom::identity(const GroupPtr& g) {
  std::vector<int> m(g->order());
  std::iota(m.begin(), m.end(), 0);
  return GroupHom(g, g, std::move(m));
}

GroupHom conjugation(const GroupPtr& g, int k) {
  std::vector<int> m(g->order());
  for (int d = 0; d < g->order(); ++d) m[d] = g->conj(k, d);
  return GroupHom(g, g, std::move(m));
}

}  // namespace dwkit
