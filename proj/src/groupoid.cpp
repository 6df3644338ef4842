#include "dwkit/groupoid.hpp"

#include <map>
#include <numeric>

#include "dwkit/errors.hpp"

namespace dwkit {

FinGroupoid::FinGroupoid(int objects, std::vector<int> src, std::vector<int> dst, std::vector<int> identities,
                         Compose compose, Invert inverse)
    : objects_(objects),
      src_(std::move(src)),
      dst_(std::move(dst)),
      id_(std::move(identities)),
      out_(objects),
      compose_(std::move(compose)),
      inv_(std::move(inverse)) {
  if (src_.size() != dst_.size()) throw Error("groupoid: src/dst length mismatch");
  if (static_cast<int>(id_.size()) != objects_) throw Error("groupoid: one identity per object required");
  for (int f = 0; f < morphism_count(); ++f) {
    if (src_[f] < 0 || src_[f] >= objects_ || dst_[f] < 0 || dst_[f] >= objects_)
      throw Error("groupoid: morphism endpoint out of range");
    out_[src_[f]].push_back(f);
  }
}

int FinGroupoid::compose(int g, int f) const {
  if (dst_[f] != src_[g]) throw Error("groupoid: morphisms not composable");
  return compose_(g, f);
}

std::vector<int> FinGroupoid::hom(int x, int y) const {
  std::vector<int> h;
  for (int f : out_[x])
    if (dst_[f] == y) h.push_back(f);
  return h;
}

int FinGroupoid::automorphism_count(int x) const {
  int c = 0;
  for (int f : out_[x]) c += dst_[f] == x;
  return c;
}

std::vector<int> FinGroupoid::components() const {
  std::vector<int> parent(objects_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int f = 0; f < morphism_count(); ++f) {
    int a = find(src_[f]), b = find(dst_[f]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> comp(objects_);
  for (int x = 0; x < objects_; ++x) comp[x] = find(x);
  return comp;
}

std::vector<int> FinGroupoid::representatives() const {
  auto comp = components();
  std::vector<int> reps;
  for (int x = 0; x < objects_; ++x)
    if (comp[x] == x) reps.push_back(x);
  return reps;
}

bool FinGroupoid::verify() const {
  for (int x = 0; x < objects_; ++x) {
    int e = id_[x];
    if (src_[e] != x || dst_[e] != x) return false;
  }
  for (int f = 0; f < morphism_count(); ++f) {
    if (compose_(f, id_[src_[f]]) != f || compose_(id_[dst_[f]], f) != f) return false;
    int g = inv_(f);
    if (src_[g] != dst_[f] || dst_[g] != src_[f]) return false;
    if (compose_(g, f) != id_[src_[f]] || compose_(f, g) != id_[dst_[f]]) return false;
    for (int g2 : out_[dst_[f]]) {
      int gf = compose_(g2, f);
      if (src_[gf] != src_[f] || dst_[gf] != dst_[g2]) return false;
      for (int h : out_[dst_[g2]])
        if (compose_(h, gf) != compose_(compose_(h, g2), f)) return false;
    }
  }
  return true;
}

Rational cardinality(const FinGroupoid& x) {
  Rational total(0);
  for (int r : x.representatives()) total += Rational(1, x.automorphism_count(r));
  return total;
}

Cyclotomic integrate(const FinGroupoid& x, const Integrand& f) {
  std::vector<Cyclotomic> val(x.object_count());
  std::vector<bool> have(x.object_count(), false);
  auto get = [&](int o) -> const Cyclotomic& {
    if (!have[o]) {
      val[o] = f(o);
      have[o] = true;
    }
    return val[o];
  };
  for (int m = 0; m < x.morphism_count(); ++m)
    if (x.src(m) != x.dst(m) && get(x.src(m)) != get(x.dst(m))) throw NotGaugeInvariant(m);
  Cyclotomic total;
  for (int r : x.representatives()) total += get(r) * Rational(1, x.automorphism_count(r));
  return total;
}

Functor::Functor(const FinGroupoid& s, const FinGroupoid& t, std::vector<int> obj, std::vector<int> mor)
    : source(&s), target(&t), on_objects(std::move(obj)), on_morphisms(std::move(mor)) {
  if (static_cast<int>(on_objects.size()) != s.object_count() ||
      static_cast<int>(on_morphisms.size()) != s.morphism_count())
    throw Error("functor: wrong table sizes");
  for (int f = 0; f < s.morphism_count(); ++f) {
    int g = on_morphisms[f];
    if (t.src(g) != on_objects[s.src(f)] || t.dst(g) != on_objects[s.dst(f)])
      throw Error("functor: morphism " + std::to_string(f) + " has the wrong endpoints");
  }
  for (int x = 0; x < s.object_count(); ++x)
    if (on_morphisms[s.identity(x)] != t.identity(on_objects[x])) throw Error("functor: identities not preserved");
}

HomotopyFiber homotopy_fiber(const Functor& F, int y) {
  const FinGroupoid& X = *F.source;
  const FinGroupoid& Y = *F.target;
  HomotopyFiber out;
  std::map<std::pair<int, int>, int> obj_index;
  for (int x = 0; x < X.object_count(); ++x)
    for (int h : Y.hom(F.on_objects[x], y)) {
      obj_index[{x, h}] = static_cast<int>(out.base_object.size());
      out.base_object.push_back(x);
      out.path.push_back(h);
    }
  const int n = static_cast<int>(out.base_object.size());
  std::vector<int> src, dst, ids(n, -1);
  std::map<std::pair<int, int>, int> mor_index;  // (fibre object, base morphism)
  for (int o = 0; o < n; ++o) {
    int x = out.base_object[o], h = out.path[o];
    for (int g : X.out(x)) {
      int h2 = Y.compose(h, Y.inverse(F.on_morphisms[g]));
      int o2 = obj_index.at({X.dst(g), h2});
      mor_index[{o, g}] = static_cast<int>(src.size());
      if (g == X.identity(x)) ids[o] = static_cast<int>(src.size());
      src.push_back(o);
      dst.push_back(o2);
      out.base_morphism.push_back(g);
    }
  }
  auto base = out.base_morphism;
  auto srcs = src;
  auto compose = [base, srcs, mor_index, &X](int g, int f) { return mor_index.at({srcs[f], X.compose(base[g], base[f])}); };
  auto dsts = dst;
  auto inverse = [base, dsts, mor_index, &X](int f) { return mor_index.at({dsts[f], X.inverse(base[f])}); };
  out.groupoid = FinGroupoid(n, std::move(src), std::move(dst), std::move(ids), compose, inverse);
  return out;
}

ActionGroupoid action_groupoid(const GroupPtr& g, int objects, const std::function<int(int k, int x)>& act) {
  ActionGroupoid out;
  out.group = g;
  const int order = g->order();
  out.act_table.resize(static_cast<size_t>(objects) * order);
  std::vector<int> src, dst, ids(objects);
  for (int x = 0; x < objects; ++x)
    for (int k = 0; k < order; ++k) {
      int y = act(k, x);
      if (y < 0 || y >= objects) throw Error("action groupoid: action leaves the object set");
      out.act_table[static_cast<size_t>(x) * order + k] = y;
      src.push_back(x);
      dst.push_back(y);
    }
  for (int x = 0; x < objects; ++x) ids[x] = x * order + g->identity();
  GroupPtr grp = g;
  auto compose = [grp, order](int b, int a) { return (a / order) * order + grp->mul(b % order, a % order); };
  auto table = out.act_table;
  auto inverse = [grp, order, table](int f) { return table[f] * order + grp->inv(f % order); };
  out.groupoid = FinGroupoid(objects, std::move(src), std::move(dst), std::move(ids), compose, inverse);
  return out;
}

namespace {

uint64_t tuple_key(const std::vector<int>& t, int order) {
  uint64_t k = 0;
  for (int x : t) k = k * order + x;
  return k;
}

}  // namespace

GaugeGroupoid::GaugeGroupoid(const GroupPtr& g, int n) : n_(n) {
  if (n < 1) throw Error("gauge groupoid dimension must be at least 1");
  const int order = g->order();
  double total = 1;
  for (int i = 0; i < n; ++i) total *= order;
  if (total > static_cast<double>(kGaugeTupleBudget))
    throw BudgetExceeded("gauge groupoid with " + std::to_string(static_cast<long long>(total)) + " tuples",
                         static_cast<long long>(total), n);
  // Depth-first over tuples, extending only by elements that commute with
  // everything so far.
  std::vector<int> t;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(t.size()) == n) {
      index_[tuple_key(t, order)] = static_cast<int>(tuples_.size());
      tuples_.push_back(t);
      return;
    }
    for (int x = 0; x < order; ++x) {
      bool ok = true;
      for (int y : t) ok &= g->commute(x, y);
      if (!ok) continue;
      t.push_back(x);
      rec();
      t.pop_back();
    }
  };
  rec();
  act_ = action_groupoid(g, static_cast<int>(tuples_.size()), [&](int k, int obj) {
    std::vector<int> s = tuples_[obj];
    for (int& x : s) x = g->conj(k, x);
    return index_.at(tuple_key(s, order));
  });
}

int GaugeGroupoid::object_of(const std::vector<int>& t) const {
  if (static_cast<int>(t.size()) != n_) return -1;
  auto it = index_.find(tuple_key(t, group()->order()));
  return it == index_.end() ? -1 : it->second;
}

Functor induced_functor(const GroupHom& f, const GaugeGroupoid& source, const GaugeGroupoid& target) {
  if (source.dim() != target.dim()) throw DegreeMismatch(source.dim(), target.dim());
  const FinGroupoid& X = source.groupoid();
  std::vector<int> obj(X.object_count()), mor(X.morphism_count());
  for (int x = 0; x < X.object_count(); ++x) {
    std::vector<int> t = source.tuple(x);
    for (int& v : t) v = f(v);
    obj[x] = target.object_of(t);
  }
  for (int m = 0; m < X.morphism_count(); ++m) mor[m] = target.morphism(obj[X.src(m)], f(source.conjugator(m)));
  return Functor(X, target.groupoid(), std::move(obj), std::move(mor));
}

}  // namespace dwkit
