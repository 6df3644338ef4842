#include "dwkit/dw.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "dwkit/errors.hpp"
#include "dwkit/groupoid.hpp"
#include "dwkit/linalg.hpp"

namespace dwkit {

namespace {

int perm_sign(std::vector<int> p) {
  int s = 1;
  for (size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      s = -s;
    }
  return s;
}

uint64_t power(int base, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<uint64_t>(base);
  return r;
}

constexpr uint64_t kMaxLoopEntries = uint64_t(1) << 26;

}  // namespace

// ---------------------------------------------------------------------------
// Loop groupoid objects and cochains

LoopObjects::LoopObjects(GroupPtr g, int m) : g_(std::move(g)), m_(m) {
  if (m < 0) throw Error("negative torus dimension");
  const int order = g_->order();
  if (m == 0) {
    tuples_.push_back({});
    index_[0] = 0;
    act_.assign(order, 0);
    return;
  }
  GaugeGroupoid gg(g_, m);
  for (int o = 0; o < gg.groupoid().object_count(); ++o) {
    const auto& t = gg.tuple(o);
    uint64_t k = 0;
    for (int x : t) k = k * order + x;
    index_[k] = static_cast<int>(tuples_.size());
    tuples_.push_back(t);
  }
  act_.resize(tuples_.size() * order);
  for (int o = 0; o < count(); ++o)
    for (int x = 0; x < order; ++x) {
      std::vector<int> s = tuples_[o];
      for (int& v : s) v = g_->conj(g_->inv(x), v);
      act_[static_cast<size_t>(o) * order + x] = find(s);
    }
}

int LoopObjects::find(const std::vector<int>& t) const {
  if (static_cast<int>(t.size()) != m_) return -1;
  uint64_t k = 0;
  for (int x : t) k = k * g_->order() + x;
  auto it = index_.find(k);
  return it == index_.end() ? -1 : it->second;
}

LoopCochain::LoopCochain(LoopObjectsPtr objects, int degree, int64_t modulus)
    : obj_(std::move(objects)), k_(degree), mod_(modulus) {
  if (degree < 0) throw Error("negative cochain degree");
  if (modulus <= 0) throw Error("cochain modulus must be positive");
  stride_ = power(obj_->group()->order(), degree);
  if (stride_ * obj_->count() > kMaxLoopEntries)
    throw BudgetExceeded("loop cochain table too large", static_cast<long long>(stride_ * obj_->count()), 1);
  vals_.assign(stride_ * obj_->count(), 0);
}

LoopCochain LoopCochain::from_cochain(const Cochain& c) {
  LoopCochain out(std::make_shared<LoopObjects>(c.group(), 0), c.degree(), c.modulus());
  for (uint64_t k = 0; k < c.size(); ++k) out.vals_[k] = c.numerator(k);
  return out;
}

uint64_t LoopCochain::key(const std::vector<int>& xs) const {
  if (static_cast<int>(xs.size()) != k_) throw DegreeMismatch(k_, static_cast<int>(xs.size()));
  uint64_t k = 0;
  for (int x : xs) k = k * group()->order() + x;
  return k;
}

std::vector<int> LoopCochain::tuple(uint64_t key) const {
  const int order = group()->order();
  std::vector<int> t(k_);
  for (int i = k_; i-- > 0;) {
    t[i] = static_cast<int>(key % order);
    key /= order;
  }
  return t;
}

bool LoopCochain::is_degenerate(uint64_t key) const {
  const int order = group()->order();
  for (int i = 0; i < k_; ++i) {
    if (static_cast<int>(key % order) == group()->identity()) return true;
    key /= order;
  }
  return false;
}

void LoopCochain::set_numerator(int o, uint64_t key, int64_t num) {
  num = mod_floor(num, mod_);
  if (num != 0 && is_degenerate(key)) throw Error("nonzero value on a degenerate loop simplex");
  vals_[static_cast<size_t>(o) * stride_ + key] = num;
}

LoopCochain LoopCochain::rescaled(int64_t m) const {
  if (m % denominator()) throw Error("cannot rescale loop cochain to modulus " + std::to_string(m));
  LoopCochain out(obj_, k_, m);
  for (size_t i = 0; i < vals_.size(); ++i) out.vals_[i] = PhaseValue(vals_[i], mod_).rescaled(m).numerator();
  return out;
}

int64_t LoopCochain::denominator() const {
  int64_t d = 1;
  for (int64_t v : vals_) d = lcm64(d, mod_ / gcd64(v, mod_));
  return d;
}

bool LoopCochain::is_zero() const {
  return std::all_of(vals_.begin(), vals_.end(), [](int64_t v) { return v == 0; });
}

LoopCochain LoopCochain::operator+(const LoopCochain& o) const {
  if (obj_->group() != o.obj_->group() || obj_->dim() != o.obj_->dim() || k_ != o.k_) throw Error("adding loop cochains on different groupoids");
  int64_t m = lcm64(mod_, o.mod_);
  LoopCochain a = rescaled(m), b = o.rescaled(m);
  for (size_t i = 0; i < a.vals_.size(); ++i) a.vals_[i] = (a.vals_[i] + b.vals_[i]) % m;
  return a;
}

LoopCochain LoopCochain::operator-() const {
  LoopCochain a = *this;
  for (auto& v : a.vals_) v = v ? mod_ - v : 0;
  return a;
}

LoopCochain LoopCochain::operator-(const LoopCochain& o) const { return *this + (-o); }

bool LoopCochain::operator==(const LoopCochain& o) const {
  if (obj_->group() != o.obj_->group() || obj_->dim() != o.obj_->dim() || k_ != o.k_) return false;
  return (*this - o).is_zero();
}

LoopCochain loop_coboundary(const LoopCochain& c) {
  const FiniteGroup& G = *c.group();
  const auto& objs = *c.objects();
  const int k = c.degree();
  const int64_t M = c.modulus();
  LoopCochain out(c.objects(), k + 1, M);
  std::vector<int> xs, s(k);
  for (int o = 0; o < objs.count(); ++o)
    for (uint64_t key = 0; key < out.stride(); ++key) {
      if (out.is_degenerate(key)) continue;
      xs = out.tuple(key);
      std::copy(xs.begin() + 1, xs.end(), s.begin());
      int64_t acc = c.numerator(objs.act(o, xs[0]), c.key(s));
      for (int i = 1; i <= k; ++i) {
        for (int j = 0, p = 0; j <= k; ++j) {
          if (j == i) continue;
          s[p++] = j == i - 1 ? G.mul(xs[i - 1], xs[i]) : xs[j];
        }
        int64_t v = c.numerator(o, c.key(s));
        acc += i % 2 ? M - v : v;
      }
      std::copy(xs.begin(), xs.end() - 1, s.begin());
      int64_t v = c.numerator(o, c.key(s));
      acc += (k + 1) % 2 ? M - v : v;
      out.set_numerator(o, key, acc % M);
    }
  return out;
}

bool is_loop_cocycle(const LoopCochain& c) { return loop_coboundary(c).is_zero(); }

std::optional<LoopCochain> solve_loop_coboundary(const LoopCochain& y, const std::vector<bool>& support,
                                                 std::optional<int64_t> modulus) {
  const int d = y.degree();
  if (d < 1) throw Error("loop coboundary solve needs degree >= 1");
  const auto& objs = *y.objects();
  const FiniteGroup& G = *y.group();
  if (static_cast<int>(support.size()) != objs.count()) throw Error("support mask has the wrong length");
  const int64_t M = modulus ? *modulus : mul_ck(y.denominator(), G.order());
  if (M % y.denominator()) throw Error("modulus is not a multiple of the denominator");
  const LoopCochain yM = y.rescaled(M);
  LoopCochain beta(y.objects(), d - 1, M);
  // Column per (supported object, nondegenerate (d-1)-tuple).
  std::vector<int> col(static_cast<size_t>(objs.count()) * beta.stride(), -1);
  int cols = 0;
  for (int o = 0; o < objs.count(); ++o) {
    if (!support[o]) continue;
    for (int x = 0; x < G.order(); ++x)
      if (support[objs.act(o, x)] != support[o]) throw Error("support is not closed under isomorphism");
    for (uint64_t k = 0; k < beta.stride(); ++k)
      if (!beta.is_degenerate(k)) col[o * beta.stride() + k] = cols++;
  }
  std::vector<std::pair<int, uint64_t>> row_keys;
  for (int o = 0; o < objs.count(); ++o)
    if (support[o])
      for (uint64_t k = 0; k < yM.stride(); ++k)
        if (!yM.is_degenerate(k)) row_keys.emplace_back(o, k);
  IntMatrix a(static_cast<int>(row_keys.size()), cols, M);
  std::vector<int64_t> b(row_keys.size());
  std::vector<int> s(d - 1);
  for (size_t r = 0; r < row_keys.size(); ++r) {
    const auto [o, key] = row_keys[r];
    b[r] = yM.numerator(o, key);
    const auto xs = yM.tuple(key);
    auto term = [&](int obj, int sign) {
      int c = col[obj * beta.stride() + beta.key(s)];
      if (c >= 0) a.add(static_cast<int>(r), c, sign);
    };
    std::copy(xs.begin() + 1, xs.end(), s.begin());
    term(objs.act(o, xs[0]), 1);
    for (int i = 1; i < d; ++i) {
      for (int j = 0, p = 0; j < d; ++j) {
        if (j == i) continue;
        s[p++] = j == i - 1 ? G.mul(xs[i - 1], xs[i]) : xs[j];
      }
      term(o, i % 2 ? -1 : 1);
    }
    std::copy(xs.begin(), xs.end() - 1, s.begin());
    term(o, d % 2 ? -1 : 1);
  }
  auto sol = solve_linear(a, b).solution;
  if (!sol) return std::nullopt;
  for (int o = 0; o < objs.count(); ++o)
    for (uint64_t k = 0; k < beta.stride(); ++k) {
      int c = col[o * beta.stride() + k];
      if (c >= 0) beta.set_numerator(o, k, (*sol)[c]);
    }
  const LoopCochain db = loop_coboundary(beta);
  for (int o = 0; o < objs.count(); ++o)
    if (support[o])
      for (uint64_t k = 0; k < yM.stride(); ++k)
        if (db.numerator(o, k) != yM.numerator(o, k)) throw Error("loop coboundary witness failed verification");
  return beta;
}

LoopCochain transgress(const LoopCochain& c) {
  const int k = c.degree();
  if (k < 1) throw Error("transgression needs degree >= 1");
  const GroupPtr& g = c.group();
  const FiniteGroup& G = *g;
  auto objs = std::make_shared<LoopObjects>(g, c.base_dim() + 1);
  const int64_t M = c.modulus();
  LoopCochain out(objs, k - 1, M);
  std::vector<int> s(k);
  for (int o = 0; o < objs->count(); ++o) {
    std::vector<int> base = objs->tuple(o);
    const int loop = base.back();
    base.pop_back();
    const int ob = c.objects()->find(base);
    for (uint64_t key = 0; key < out.stride(); ++key) {
      if (out.is_degenerate(key)) continue;
      auto xs = out.tuple(key);
      int64_t acc = 0;
      int prefix = G.identity();
      for (int i = 0; i < k; ++i) {
        if (i > 0) prefix = G.mul(prefix, xs[i - 1]);
        for (int j = 0; j < i; ++j) s[j] = xs[j];
        s[i] = G.mul(G.mul(G.inv(prefix), loop), prefix);
        for (int j = i; j < k - 1; ++j) s[j + 1] = xs[j];
        int64_t v = c.numerator(ob, c.key(s));
        acc += i % 2 ? M - v : v;
      }
      out.set_numerator(o, key, acc % M);
    }
  }
  return out;
}

LoopCochain transgress_circle(const Cochain& theta) {
  if (!is_cocycle(theta)) throw NotACocycle("transgression input");
  return transgress(LoopCochain::from_cochain(theta));
}

LoopCochain transgress_iterated(const Cochain& theta, int times) {
  if (times < 0 || times > theta.degree()) throw Error("cannot transgress that many times");
  LoopCochain c = LoopCochain::from_cochain(theta);
  for (int i = 0; i < times; ++i) c = transgress(c);
  return c;
}

PhaseValue dpr_cocycle(const Cochain& theta, int g, int x, int y) {
  const FiniteGroup& G = *theta.group();
  const int xy = G.mul(x, y);
  const int g2 = G.mul(G.mul(G.inv(xy), g), xy);
  const int g1 = G.mul(G.mul(G.inv(x), g), x);
  return theta.at({g, x, y}) + theta.at({x, y, g2}) - theta.at({x, g1, y});
}

// ---------------------------------------------------------------------------
// Torus partition functions

PhaseValue torus_evaluate(const Cochain& theta, const std::vector<int>& tuple) {
  const FiniteGroup& G = *theta.group();
  const int n = static_cast<int>(tuple.size());
  if (n != theta.degree()) throw DegreeMismatch(theta.degree(), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!G.commute(tuple[i], tuple[j])) throw NonCommuting(tuple[i], tuple[j]);
  const int64_t M = theta.modulus();
  std::vector<int> p(n), s(n);
  std::iota(p.begin(), p.end(), 0);
  int64_t acc = 0;
  do {
    for (int i = 0; i < n; ++i) s[i] = tuple[p[i]];
    int64_t v = theta.numerator(theta.key(s));
    acc = (acc + (perm_sign(p) > 0 ? v : M - v)) % M;
  } while (std::next_permutation(p.begin(), p.end()));
  return PhaseValue(acc, M);
}

namespace {

void check_partition_input(const Cochain& theta, int n) {
  if (theta.degree() != n) throw DegreeMismatch(n, theta.degree());
  if (!is_cocycle(theta)) throw NotACocycle("torus partition function input");
}

TorusPartition finish_partition(const GroupPtr& g, int64_t M, std::vector<int64_t> hist) {
  TorusPartition out;
  out.modulus = M;
  out.group_order = g->order();
  out.histogram = std::move(hist);
  for (int64_t r = 0; r < M; ++r)
    if (out.histogram[r]) out.value += Cyclotomic::phase(PhaseValue(r, M), Rational(out.histogram[r], g->order()));
  if (!out.value.is_rational()) throw Error("torus partition function is not rational: " + out.value.str());
  Rational v = out.value.to_rational();
  if (v.denominator() != 1 || v.numerator() < 0)
    throw Error("torus partition function is not a nonnegative integer: " + out.value.str());
  out.integer = v.numerator();
  return out;
}

}  // namespace

TorusPartition dw_partition_torus(const GroupPtr& g, const Cochain& theta, int n, bool parallel) {
  check_partition_input(theta, n);
  const LoopObjects objs(g, n);
  const int64_t M = theta.modulus();
  std::vector<int64_t> hist(M, 0);
  const int count = objs.count();
#pragma omp parallel if (parallel)
  {
    std::vector<int64_t> local(M, 0);
#pragma omp for schedule(static)
    for (int o = 0; o < count; ++o) ++local[torus_evaluate(theta, objs.tuple(o)).numerator()];
#pragma omp critical
    for (int64_t r = 0; r < M; ++r) hist[r] += local[r];
  }
  return finish_partition(g, M, std::move(hist));
}

TorusPartition dw_partition_torus_reference(const GroupPtr& g, const Cochain& theta, int n) {
  check_partition_input(theta, n);
  const LoopObjects objs(g, n);
  const int64_t M = theta.modulus();
  std::vector<int64_t> hist(M, 0);
  for (int o = 0; o < objs.count(); ++o)
    ++hist[evaluate(theta, torus_fundamental_cycle(g, objs.tuple(o))).numerator()];
  return finish_partition(g, M, std::move(hist));
}

int64_t twisted_irrep_count(const GroupPtr& g, const Cochain& omega) {
  return dw_partition_torus(g, omega, 2).integer;
}

int64_t drinfeld_double_simple_count(const GroupPtr& g, const Cochain& theta) {
  return dw_partition_torus(g, theta, 3).integer;
}

// ---------------------------------------------------------------------------
// Parallel sections

TwistedOrbits twisted_orbits(int objects, const GroupPtr& g, const std::function<int(int, int)>& act,
                             const std::function<PhaseValue(int, int)>& phase) {
  const int order = g->order();
  TwistedOrbits out;
  out.orbit_of.assign(objects, -1);
  out.transport.assign(objects, PhaseValue());
  for (int start = 0; start < objects; ++start) {
    if (out.orbit_of[start] >= 0) continue;
    const int orbit = static_cast<int>(out.rep.size());
    out.rep.push_back(start);
    out.orbit_of[start] = orbit;
    std::deque<int> queue{start};
    std::vector<int> members;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      members.push_back(u);
      for (int x = 0; x < order; ++x) {
        int v = act(u, x);
        if (out.orbit_of[v] >= 0) continue;
        out.orbit_of[v] = orbit;
        out.transport[v] = out.transport[u] + phase(u, x);
        queue.push_back(v);
      }
    }
    // The stabilizer character, decided on generators.
    std::vector<int> stab;
    for (int x = 0; x < order; ++x)
      if (act(start, x) == start) stab.push_back(x);
    bool trivial = true;
    for (int x : g->generators_of(stab)) trivial &= phase(start, x).is_zero();
    out.trivial.push_back(trivial);
    // For a cocycle the character decides consistency on every edge.
    if (trivial)
      for (int u : members)
        for (int x = 0; x < order; ++x)
          if (out.transport[act(u, x)] != out.transport[u] + phase(u, x))
            throw Error("line bundle phases do not form a groupoid cocycle");
  }
  out.basis_index.assign(out.rep.size(), -1);
  for (size_t o = 0; o < out.rep.size(); ++o)
    if (out.trivial[o]) {
      out.basis_index[o] = static_cast<int>(out.basis.size());
      out.basis.push_back(static_cast<int>(o));
    }
  return out;
}

std::optional<PhaseValue> StateSpace::section_value(int b, int o) const {
  if (orbits.orbit_of[o] != orbits.basis[b]) return std::nullopt;
  return orbits.transport[o];
}

StateSpace state_space_torus(const GroupPtr& g, const Cochain& theta) {
  const int n = theta.degree();
  if (n < 2) throw Error("state spaces need a cocycle of degree >= 2");
  if (!is_cocycle(theta)) throw NotACocycle("state space input");
  LoopCochain line = transgress_iterated(theta, n - 1);
  const LoopObjects& objs = *line.objects();
  TwistedOrbits orbits = twisted_orbits(
      objs.count(), g, [&](int o, int x) { return objs.act(o, x); },
      [&](int o, int x) { return line.at(o, {x}); });
  return StateSpace{g, theta, n, n - 1, std::move(line), std::move(orbits)};
}

MonomialMatrix MonomialMatrix::compose(const MonomialMatrix& right) const {
  MonomialMatrix out;
  out.perm.resize(right.perm.size());
  out.phase.resize(right.perm.size());
  for (size_t j = 0; j < right.perm.size(); ++j) {
    out.perm[j] = perm[right.perm[j]];
    out.phase[j] = phase[right.perm[j]] + right.phase[j];
  }
  return out;
}

SymmetryAction symmetry_action(const GroupPtr& G, const std::vector<std::vector<int>>& alpha,
                               const std::vector<Cochain>& phi, const StateSpace& s) {
  const GroupPtr& D = s.group;
  const int order = G->order();
  if (static_cast<int>(alpha.size()) != order || static_cast<int>(phi.size()) != order)
    throw Error("symmetry action: need one automorphism and one cochain per group element");
  const Cochain& omega = s.theta;
  for (int g = 0; g < order; ++g) {
    GroupHom a_inv(D, D, alpha[G->inv(g)]);
    if (phi[g].degree() != omega.degree() - 1) throw DegreeMismatch(omega.degree() - 1, phi[g].degree());
    if (coboundary(phi[g]) != omega - pullback(a_inv, omega))
      throw IncompatiblePhases("d Phi_" + G->element_name(g) + " != omega - alpha(g^-1)^* omega");
  }
  const LoopObjects& objs = *s.line.objects();
  const auto& orb = s.orbits;
  const int dim = s.dimension();
  SymmetryAction out;
  out.group = G;
  for (int g = 0; g < order; ++g) {
    const auto& a_inv = alpha[G->inv(g)];
    MonomialMatrix m;
    m.perm.assign(dim, -1);
    m.phase.assign(dim, PhaseValue());
    for (int b = 0; b < dim; ++b) {
      const int orbit = orb.basis[b];
      // Values of g.e_b, keyed by object.
      std::vector<std::pair<int, PhaseValue>> support;
      for (int o = 0; o < objs.count(); ++o) {
        std::vector<int> t = objs.tuple(o);
        for (int& x : t) x = a_inv[x];
        int o2 = objs.find(t);
        if (o2 < 0) throw IncompatiblePhases("alpha does not preserve commuting tuples");
        if (orb.orbit_of[o2] != orbit) continue;
        support.emplace_back(o, orb.transport[o2] + torus_evaluate(phi[g], objs.tuple(o)));
      }
      const int target = orb.orbit_of[support.front().first];
      const int row = orb.basis_index[target];
      if (row < 0) throw IncompatiblePhases("image section lands on an orbit with nontrivial character");
      const PhaseValue at_rep = [&] {
        for (const auto& [o, v] : support)
          if (o == orb.rep[target]) return v;
        throw IncompatiblePhases("image section misses its orbit representative");
      }();
      for (const auto& [o, v] : support)
        if (orb.orbit_of[o] != target || v != at_rep + orb.transport[o])
          throw IncompatiblePhases("transformed section is not parallel");
      m.perm[b] = row;
      m.phase[b] = at_rep;
    }
    out.rho.push_back(std::move(m));
  }
  out.defect.resize(static_cast<size_t>(order) * order);
  for (int g1 = 0; g1 < order; ++g1)
    for (int g2 = 0; g2 < order; ++g2) {
      MonomialMatrix lhs = out.rho[g2].compose(out.rho[g1]);
      const MonomialMatrix& rhs = out.rho[G->mul(g2, g1)];
      if (lhs.perm != rhs.perm) throw IncompatiblePhases("symmetry action does not compose up to phases");
      std::vector<PhaseValue> d(dim);
      for (int j = 0; j < dim; ++j) {
        d[lhs.perm[j]] = lhs.phase[j] - rhs.phase[j];
        out.honest &= d[lhs.perm[j]].is_zero();
      }
      out.defect[static_cast<size_t>(g1) * order + g2] = std::move(d);
    }
  return out;
}

}  // namespace dwkit
