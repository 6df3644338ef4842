#include "dwkit/cochain.hpp"

#include <algorithm>
#include <numeric>

#include "dwkit/errors.hpp"

namespace dwkit {

namespace {

// Sign of a permutation given as a sequence of distinct positions.
int perm_sign(std::vector<int> p) {
  int s = 1;
  for (size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      s = -s;
    }
  return s;
}

constexpr uint64_t kMaxEntries = uint64_t(1) << 26;

}  // namespace

// ---------------------------------------------------------------------------
// Cochain

Cochain::Cochain(GroupPtr g, int degree, int64_t modulus) : g_(std::move(g)), n_(degree), mod_(modulus) {
  if (degree < 0) throw Error("negative cochain degree");
  if (modulus <= 0) throw Error("cochain modulus must be positive");
  uint64_t size = 1;
  for (int i = 0; i < degree; ++i) {
    size *= static_cast<uint64_t>(g_->order());
    if (size > kMaxEntries) throw BudgetExceeded("cochain table too large", static_cast<long long>(size), 1);
  }
  vals_.assign(size, 0);
}

uint64_t Cochain::key(const std::vector<int>& t) const {
  if (static_cast<int>(t.size()) != n_) throw DegreeMismatch(n_, static_cast<int>(t.size()));
  uint64_t k = 0;
  for (int x : t) k = k * g_->order() + x;
  return k;
}

std::vector<int> Cochain::tuple(uint64_t key) const {
  std::vector<int> t(n_);
  for (int i = n_; i-- > 0;) {
    t[i] = static_cast<int>(key % g_->order());
    key /= g_->order();
  }
  return t;
}

bool Cochain::is_degenerate(uint64_t key) const {
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(key % g_->order()) == g_->identity()) return true;
    key /= g_->order();
  }
  return false;
}

void Cochain::widen(int64_t m) {
  if (m % mod_) throw Error("widen to a non-multiple");
  int64_t f = m / mod_;
  for (auto& v : vals_) v = mul_ck(v, f);
  mod_ = m;
}

void Cochain::set(const std::vector<int>& t, const PhaseValue& v) {
  uint64_t k = key(t);
  if (is_degenerate(k)) {
    if (!v.is_zero()) throw Error("nonzero value on a degenerate tuple");
    return;
  }
  PhaseValue r = v.reduced();
  if (mod_ % r.modulus()) widen(lcm64(mod_, r.modulus()));
  vals_[k] = r.rescaled(mod_).numerator();
}

void Cochain::set_numerator(uint64_t key, int64_t num) {
  num = mod_floor(num, mod_);
  if (num && is_degenerate(key)) throw Error("nonzero value on a degenerate tuple");
  vals_[key] = num;
}

Cochain Cochain::rescaled(int64_t m) const {
  Cochain c(g_, n_, m);
  if (m % mod_ == 0) {
    int64_t f = m / mod_;
    for (size_t i = 0; i < vals_.size(); ++i) c.vals_[i] = mul_ck(vals_[i], f);
    return c;
  }
  for (size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i]) c.vals_[i] = PhaseValue(vals_[i], mod_).rescaled(m).numerator();
  return c;
}

int64_t Cochain::denominator() const {
  int64_t g = mod_;
  for (int64_t v : vals_) g = gcd64(g, v);
  return mod_ / g;
}

bool Cochain::is_zero() const {
  return std::all_of(vals_.begin(), vals_.end(), [](int64_t v) { return v == 0; });
}

Cochain Cochain::operator+(const Cochain& o) const {
  if (g_ != o.g_ && !g_->same_table(*o.g_)) throw Error("cochains on different groups");
  if (n_ != o.n_) throw DegreeMismatch(n_, o.n_);
  int64_t m = lcm64(mod_, o.mod_);
  Cochain a = rescaled(m), b = o.rescaled(m);
  for (size_t i = 0; i < a.vals_.size(); ++i) a.vals_[i] = (a.vals_[i] + b.vals_[i]) % m;
  return a;
}

Cochain Cochain::operator-() const {
  Cochain a = *this;
  for (auto& v : a.vals_) v = v ? mod_ - v : 0;
  return a;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + (-o); }

Cochain Cochain::operator*(int64_t k) const {
  Cochain a = *this;
  int64_t kk = mod_floor(k, mod_);
  for (auto& v : a.vals_) v = static_cast<int64_t>(static_cast<__int128>(v) * kk % mod_);
  return a;
}

bool Cochain::operator==(const Cochain& o) const {
  if (n_ != o.n_ || g_->order() != o.g_->order()) return false;
  int64_t m = lcm64(mod_, o.mod_);
  int64_t fa = m / mod_, fb = m / o.mod_;
  for (size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i] * fa != o.vals_[i] * fb) return false;
  return true;
}

std::vector<std::pair<std::vector<int>, PhaseValue>> Cochain::entries() const {
  std::vector<std::pair<std::vector<int>, PhaseValue>> out;
  for (size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i]) out.emplace_back(tuple(i), PhaseValue(vals_[i], mod_));
  return out;
}

// ---------------------------------------------------------------------------
// TupleIndex

TupleIndex::TupleIndex(const FiniteGroup& g, int n) : n_(n), base_(g.order() - 1), order_(g.order()) {
  rank_.assign(g.order(), -1);
  for (int x = 0; x < g.order(); ++x)
    if (x != g.identity()) {
      rank_[x] = static_cast<int>(elem_.size());
      elem_.push_back(x);
    }
  for (int i = 0; i < n; ++i) count_ *= base_;
}

int64_t TupleIndex::index(const int* t) const {
  int64_t k = 0;
  for (int i = 0; i < n_; ++i) {
    int r = rank_[t[i]];
    if (r < 0) return -1;
    k = k * base_ + r;
  }
  return k;
}

void TupleIndex::tuple(int64_t idx, int* out) const {
  for (int i = n_; i-- > 0;) {
    out[i] = elem_[idx % base_];
    idx /= base_;
  }
}

uint64_t TupleIndex::full_key(int64_t idx) const {
  std::vector<int> t(n_);
  tuple(idx, t.data());
  uint64_t k = 0;
  for (int x : t) k = k * order_ + x;
  return k;
}

// ---------------------------------------------------------------------------
// Coboundary

Cochain coboundary(const Cochain& c, bool parallel) {
  const FiniteGroup& G = *c.group();
  const int n = c.degree();
  Cochain out(c.group(), n + 1, c.modulus());
  const int64_t M = c.modulus();
  TupleIndex rows(G, n + 1);
  const int64_t count = rows.count();
  const int ord = G.order();
  std::vector<int64_t> res(count, 0);
  auto kernel = [&](int64_t r) {
    int t[64];
    rows.tuple(r, t);
    auto key_of = [&](auto&& get, int len) {
      uint64_t k = 0;
      for (int i = 0; i < len; ++i) k = k * ord + get(i);
      return k;
    };
    int64_t acc = c.numerator(key_of([&](int i) { return t[i + 1]; }, n));
    for (int i = 1; i <= n; ++i) {
      int prod = G.mul(t[i - 1], t[i]);
      if (prod == G.identity()) continue;
      uint64_t k = key_of(
          [&](int j) {
            if (j < i - 1) return t[j];
            if (j == i - 1) return prod;
            return t[j + 1];
          },
          n);
      int64_t v = c.numerator(k);
      acc += (i % 2) ? M - v : v;
    }
    int64_t last = c.numerator(key_of([&](int i) { return t[i]; }, n));
    acc += ((n + 1) % 2) ? M - last : last;
    res[r] = acc % M;
  };
  if (n + 1 > 64) throw Error("degree too large");
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t r = 0; r < count; ++r) kernel(r);
  } else {
    for (int64_t r = 0; r < count; ++r) kernel(r);
  }
  for (int64_t r = 0; r < count; ++r)
    if (res[r]) out.set_numerator(rows.full_key(r), res[r]);
  return out;
}

bool is_cocycle(const Cochain& c) { return coboundary(c).is_zero(); }

IntMatrix coboundary_matrix(const FiniteGroup& g, int n, int64_t modulus) {
  TupleIndex cols(g, n), rows(g, n + 1);
  if (rows.count() > (int64_t(1) << 31)) throw BudgetExceeded("coboundary matrix", rows.count(), cols.count());
  IntMatrix m(static_cast<int>(rows.count()), static_cast<int>(cols.count()), modulus);
  std::vector<int> t(n + 1), f(std::max(n, 1));
  for (int64_t r = 0; r < rows.count(); ++r) {
    rows.tuple(r, t.data());
    auto put = [&](int sign) {
      int64_t c = cols.index(f.data());
      if (c >= 0) m.add(static_cast<int>(r), static_cast<int>(c), sign);
    };
    for (int i = 0; i < n; ++i) f[i] = t[i + 1];
    put(1);
    for (int i = 1; i <= n; ++i) {
      for (int j = 0; j < n; ++j) f[j] = j < i - 1 ? t[j] : j == i - 1 ? g.mul(t[i - 1], t[i]) : t[j + 1];
      put(i % 2 ? -1 : 1);
    }
    for (int i = 0; i < n; ++i) f[i] = t[i];
    put((n + 1) % 2 ? -1 : 1);
  }
  return m;
}

std::vector<int64_t> to_normalized_vector(const Cochain& c, int64_t m) {
  Cochain r = c.rescaled(m);
  TupleIndex idx(*c.group(), c.degree());
  std::vector<int64_t> v(idx.count());
  for (int64_t i = 0; i < idx.count(); ++i) v[i] = r.numerator(idx.full_key(i));
  return v;
}

Cochain from_normalized_vector(const GroupPtr& g, int n, const std::vector<int64_t>& v, int64_t m) {
  TupleIndex idx(*g, n);
  if (static_cast<int64_t>(v.size()) != idx.count()) throw Error("cochain vector has wrong length");
  Cochain c(g, n, m);
  for (int64_t i = 0; i < idx.count(); ++i) c.set_numerator(idx.full_key(i), v[i]);
  return c;
}

Cochain pullback(const GroupHom& f, const Cochain& c) {
  if (f.target()->order() != c.group()->order()) throw Error("pullback target mismatch");
  Cochain out(f.source(), c.degree(), c.modulus());
  const int n = c.degree();
  std::vector<int> img(n);
  for (uint64_t k = 0; k < out.size(); ++k) {
    if (out.is_degenerate(k)) continue;
    auto t = out.tuple(k);
    for (int i = 0; i < n; ++i) img[i] = f(t[i]);
    out.set_numerator(k, c.numerator(c.key(img)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chains

void FormalChain::add(const std::vector<int>& t, int64_t coeff) {
  if (static_cast<int>(t.size()) != n_) throw DegreeMismatch(n_, static_cast<int>(t.size()));
  if (coeff == 0) return;
  for (int x : t)
    if (x == g_->identity()) return;
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    terms_.emplace(t, coeff);
    return;
  }
  it->second = add_ck(it->second, coeff);
  if (it->second == 0) terms_.erase(it);
}

void FormalChain::add(const FormalChain& z, int64_t coeff) {
  if (z.n_ != n_) throw DegreeMismatch(n_, z.n_);
  for (const auto& [t, c] : z.terms_) add(t, mul_ck(c, coeff));
}

FormalChain boundary(const FormalChain& z) {
  const FiniteGroup& G = *z.group();
  const int n = z.degree();
  if (n == 0) return FormalChain(z.group(), 0);
  FormalChain out(z.group(), n - 1);
  for (const auto& [t, c] : z.terms()) {
    out.add(std::vector<int>(t.begin() + 1, t.end()), c);
    for (int i = 1; i < n; ++i) {
      std::vector<int> f;
      for (int j = 0; j < n; ++j) {
        if (j == i - 1) {
          f.push_back(G.mul(t[j], t[j + 1]));
          ++j;
        } else {
          f.push_back(t[j]);
        }
      }
      out.add(f, i % 2 ? -c : c);
    }
    out.add(std::vector<int>(t.begin(), t.end() - 1), n % 2 ? -c : c);
  }
  return out;
}

FormalChain shuffle_cross(const FormalChain& a, const FormalChain& b) {
  const int p = a.degree(), q = b.degree();
  FormalChain out(a.group(), p + q);
  // mask[k] = true when slot k takes the next entry of a.
  std::vector<int> slots(p + q);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<bool> mask(p + q, false);
  std::fill(mask.begin(), mask.begin() + p, true);
  std::vector<std::vector<bool>> shuffles;
  std::sort(mask.begin(), mask.end());
  do shuffles.push_back(mask);
  while (std::next_permutation(mask.begin(), mask.end()));
  for (const auto& sh : shuffles) {
    // Permutation sending the concatenation (a, b) to the interleaving.
    std::vector<int> perm;
    int ia = 0, ib = 0;
    for (int k = 0; k < p + q; ++k) perm.push_back(sh[k] ? ia++ : p + ib++);
    int sign = perm_sign(perm);
    for (const auto& [ta, ca] : a.terms())
      for (const auto& [tb, cb] : b.terms()) {
        std::vector<int> t;
        int ja = 0, jb = 0;
        for (int k = 0; k < p + q; ++k) t.push_back(sh[k] ? ta[ja++] : tb[jb++]);
        out.add(t, sign * mul_ck(ca, cb));
      }
  }
  return out;
}

FormalChain torus_fundamental_cycle(const GroupPtr& g, const std::vector<int>& tuple) {
  for (size_t i = 0; i < tuple.size(); ++i)
    for (size_t j = i + 1; j < tuple.size(); ++j)
      if (!g->commute(tuple[i], tuple[j])) throw NonCommuting(tuple[i], tuple[j]);
  FormalChain z(g, 0);
  z.add(std::vector<int>{}, 1);
  for (int x : tuple) {
    FormalChain loop(g, 1);
    loop.add({x}, 1);
    z = shuffle_cross(z, loop);
  }
  return z;
}

FormalChain map_chain(const FormalChain& z, const GroupPtr& target, const std::vector<int>& map) {
  FormalChain out(target, z.degree());
  for (const auto& [t, c] : z.terms()) {
    std::vector<int> s(t.size());
    for (size_t i = 0; i < t.size(); ++i) s[i] = map[t[i]];
    out.add(s, c);
  }
  return out;
}

FormalChain prism(const FormalChain& z, int eta) {
  const FiniteGroup& G = *z.group();
  const int n = z.degree();
  const int eta_inv = G.inv(eta);
  FormalChain out(z.group(), n + 1);
  for (const auto& [t, c] : z.terms()) {
    for (int i = 0; i <= n; ++i) {
      std::vector<int> s;
      for (int j = 0; j < i; ++j) s.push_back(t[j]);
      s.push_back(eta);
      for (int j = i; j < n; ++j) s.push_back(G.mul(G.mul(eta_inv, t[j]), eta));
      out.add(s, i % 2 ? -c : c);
    }
  }
  return out;
}

PhaseValue evaluate(const Cochain& c, const FormalChain& z) {
  if (c.degree() != z.degree()) throw DegreeMismatch(c.degree(), z.degree());
  const int64_t M = c.modulus();
  __int128 acc = 0;
  for (const auto& [t, coeff] : z.terms()) {
    acc += static_cast<__int128>(coeff % M) * c.numerator(c.key(t));
    acc %= M;
  }
  return PhaseValue(static_cast<int64_t>(acc), M);
}

Cochain prism_pairing(const Cochain& w, int eta, const GroupPtr& source, const std::vector<int>& map) {
  const int n = w.degree();
  if (n < 1) throw Error("prism pairing needs degree >= 1");
  const FiniteGroup& H = *w.group();
  const int eta_inv = H.inv(eta);
  const int64_t M = w.modulus();
  Cochain out(source, n - 1, M);
  std::vector<int> y(n - 1), s(n);
  for (uint64_t k = 0; k < out.size(); ++k) {
    if (out.is_degenerate(k)) continue;
    auto t = out.tuple(k);
    for (int i = 0; i < n - 1; ++i) y[i] = map[t[i]];
    int64_t acc = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) s[j] = y[j];
      s[i] = eta;
      for (int j = i; j < n - 1; ++j) s[j + 1] = H.mul(H.mul(eta_inv, y[j]), eta);
      bool degenerate = false;
      for (int x : s) degenerate |= x == H.identity();
      if (degenerate) continue;
      int64_t v = w.numerator(w.key(s));
      acc += (i % 2) ? M - v : v;
    }
    out.set_numerator(k, acc % M);
  }
  return out;
}

Cochain interval_pairing(const Cochain& w_hat, int g_hat, const GroupHom& iota) {
  if (iota.target()->order() != w_hat.group()->order()) throw Error("interval pairing: group mismatch");
  return -prism_pairing(w_hat, g_hat, iota.source(), iota.map());
}

// ---------------------------------------------------------------------------
// Catalog

Cochain omega_zn_zn(int n, int k) {
  GroupPtr g = product_group({cyclic_group(n), cyclic_group(n)});
  Cochain c(g, 2, n);
  for (int x = 0; x < g->order(); ++x)
    for (int y = 0; y < g->order(); ++y) {
      int a1 = x / n, b2 = y % n;
      c.set({x, y}, PhaseValue(static_cast<int64_t>(k) * a1 * b2, n));
    }
  return c;
}

Cochain d8_cocycle() {
  GroupPtr g = dihedral_group(8);
  Cochain c(g, 2, 4);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int j = x / 4, i2 = y % 4;
      c.set({x, y}, PhaseValue(j ? i2 : 0, 4));
    }
  return c;
}

Cochain zn_cocycle3(int n, int k) {
  GroupPtr g = cyclic_group(n);
  Cochain c(g, 3, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) c.set({a, b, d}, PhaseValue(static_cast<int64_t>(k) * a * ((b + d) / n), n));
  return c;
}

std::vector<std::vector<int>> floor_extension_sigma(int n, int m) {
  std::vector<std::vector<int>> s(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s[a][b] = ((a + b) / m) % n;
  return s;
}

Cochain catalog_cocycle(const std::string& name, const std::vector<int>& params) {
  auto need = [&](size_t k) {
    if (params.size() != k) throw UnknownFamily(name + " with " + std::to_string(params.size()) + " parameters");
  };
  if (name == "omega") {
    need(2);
    return omega_zn_zn(params[0], params[1]);
  }
  if (name == "d8") {
    need(0);
    return d8_cocycle();
  }
  if (name == "zn3") {
    need(2);
    return zn_cocycle3(params[0], params[1]);
  }
  throw UnknownFamily(name);
}

}  // namespace dwkit
