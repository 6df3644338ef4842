#include "dwkit/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_set>

#include "dwkit/errors.hpp"
#include "dwkit/phase.hpp"

namespace dwkit {

namespace {

// Arithmetic in Z (checked) or Z/m.
struct Ring {
  int64_t m;

  int64_t norm(int64_t v) const { return m ? mod_floor(v, m) : v; }
  int64_t add(int64_t a, int64_t b) const {
    if (!m) return add_ck(a, b);
    int64_t r = a + b;  // both in [0, m)
    return r >= m ? r - m : r;
  }
  int64_t sub(int64_t a, int64_t b) const { return m ? add(a, b ? m - b : 0) : add_ck(a, -b); }
  int64_t mul(int64_t a, int64_t b) const {
    if (!m) return mul_ck(a, b);
    return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
  }
  bool is_unit(int64_t a) const { return m ? gcd64(a, m) == 1 : (a == 1 || a == -1); }
  int64_t inv(int64_t a) const {
    if (!m) return a;  // +-1
    auto [g, s, t] = egcd(a, m);
    (void)t;
    if (g != 1) throw Error("inverse of a non-unit");
    return mod_floor(s, m);
  }
  // g = gcd(a, b) >= 0 with s a + t b = g.
  static std::tuple<int64_t, int64_t, int64_t> egcd(int64_t a, int64_t b) {
    int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      int64_t q = r0 / r1;
      int64_t r2 = r0 - q * r1;
      int64_t s2 = s0 - q * s1;
      int64_t t2 = t0 - q * t1;
      r0 = r1, r1 = r2, s0 = s1, s1 = s2, t0 = t1, t1 = t2;
    }
    if (r0 < 0) r0 = -r0, s0 = -s0, t0 = -t0;
    return {r0, s0, t0};
  }
};

using Vec = std::vector<int64_t>;

// v <- a v + b w, w <- c v + d w on indices [from, v.size()).
void row_op(const Ring& R, Vec& v, Vec& w, int64_t a, int64_t b, int64_t c, int64_t d, size_t from = 0) {
  a = R.norm(a), b = R.norm(b), c = R.norm(c), d = R.norm(d);
  for (size_t k = from; k < v.size(); ++k) {
    int64_t x = v[k], y = w[k];
    if (x == 0 && y == 0) continue;
    v[k] = R.add(R.mul(a, x), R.mul(b, y));
    w[k] = R.add(R.mul(c, x), R.mul(d, y));
  }
}

// Row op that zeroes w[col] against v[col]; v[col] becomes the gcd.
void eliminate_rows(const Ring& R, Vec& v, Vec& w, int col) {
  int64_t a = v[col], b = w[col];
  if (b == 0) return;
  if (a != 0 && b % a == 0) {
    int64_t q = R.norm(b / a);
    for (size_t k = col; k < v.size(); ++k)
      if (v[k]) w[k] = R.sub(w[k], R.mul(q, v[k]));
    return;
  }
  auto [g, s, t] = Ring::egcd(a, b);
  row_op(R, v, w, s, t, -(b / g), a / g, col);
}

struct VecHash {
  size_t operator()(const Vec& v) const {
    uint64_t h = 1469598103934665603ULL;
    for (int64_t x : v) {
      h ^= static_cast<uint64_t>(x);
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

// One Schur complement row, optionally followed by its reduced right-hand sides.
void schur_row(const Ring& R, const IntMatrix& a, int q, const std::vector<int>& col_step,
               const std::vector<int>& col_free, const std::vector<Vec>& exp, int nfree,
               const std::vector<Vec>* rhs, const std::vector<Vec>* y, Vec& out) {
  size_t nk = rhs ? rhs->size() : 0;
  out.assign(nfree + nk, 0);
  for (const auto& e : a.row(q)) {
    int f = col_free[e.col];
    if (f >= 0) {
      out[f] = R.add(out[f], R.norm(e.val));
      continue;
    }
    int s = col_step[e.col];
    int64_t coef = R.norm(e.val);
    const Vec& ex = exp[s];
    for (int j = 0; j < nfree; ++j)
      if (ex[j]) out[j] = R.sub(out[j], R.mul(coef, ex[j]));
    for (size_t k = 0; k < nk; ++k)
      if ((*y)[k][s]) out[nfree + k] = R.sub(out[nfree + k], R.mul(coef, (*y)[k][s]));
  }
  for (size_t k = 0; k < nk; ++k) out[nfree + k] = R.add(out[nfree + k], R.norm((*rhs)[k][q]));
}

}  // namespace

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(int rows, int cols, int64_t modulus)
    : rows_(rows), cols_(cols), mod_(modulus), data_(rows) {
  if (rows < 0 || cols < 0 || modulus < 0) throw Error("bad matrix shape");
}

void IntMatrix::add(int r, int c, int64_t v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw Error("matrix index out of range");
  if (mod_) v = mod_floor(v, mod_);
  if (v == 0) return;
  auto& row = data_[r];
  for (size_t k = 0; k < row.size(); ++k) {
    if (row[k].col != c) continue;
    int64_t s = mod_ ? (row[k].val + v) % mod_ : add_ck(row[k].val, v);
    if (s == 0) {
      row.erase(row.begin() + k);
    } else {
      row[k].val = s;
    }
    return;
  }
  row.push_back({c, v});
}

int64_t IntMatrix::at(int r, int c) const {
  for (const auto& e : data_[r])
    if (e.col == c) return e.val;
  return 0;
}

int IntMatrix::add_row() {
  data_.emplace_back();
  return rows_++;
}

size_t IntMatrix::nonzeros() const {
  size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<int64_t>>& d, int64_t modulus) {
  int r = static_cast<int>(d.size());
  int c = r ? static_cast<int>(d[0].size()) : 0;
  IntMatrix m(r, c, modulus);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(d[i].size()) != c) throw Error("ragged matrix");
    for (int j = 0; j < c; ++j) m.add(i, j, d[i][j]);
  }
  return m;
}

std::vector<std::vector<int64_t>> IntMatrix::to_dense() const {
  std::vector<std::vector<int64_t>> d(rows_, std::vector<int64_t>(cols_, 0));
  for (int i = 0; i < rows_; ++i)
    for (const auto& e : data_[i]) d[i][e.col] = e.val;
  return d;
}

std::vector<int64_t> IntMatrix::apply(const std::vector<int64_t>& x) const {
  if (static_cast<int>(x.size()) != cols_) throw Error("dimension mismatch in apply");
  Ring R{mod_};
  std::vector<int64_t> y(rows_, 0);
  for (int i = 0; i < rows_; ++i)
    for (const auto& e : data_[i]) y[i] = R.add(y[i], R.mul(e.val, R.norm(x[e.col])));
  return y;
}

// ---------------------------------------------------------------------------
// Schur complement kernels

std::vector<std::vector<int64_t>> schur_complement(const IntMatrix& a, const std::vector<int>& q_rows,
                                                   const std::vector<int>& col_step,
                                                   const std::vector<int>& col_free,
                                                   const std::vector<std::vector<int64_t>>& exp,
                                                   int free_count, bool parallel) {
  Ring R{a.modulus()};
  std::vector<Vec> out(q_rows.size());
  long n = static_cast<long>(q_rows.size());
  if (parallel) {
    bool overflow = false;
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) {
      try {
        schur_row(R, a, q_rows[i], col_step, col_free, exp, free_count, nullptr, nullptr, out[i]);
      } catch (const ArithmeticOverflow&) {
#pragma omp atomic write
        overflow = true;
      }
    }
    if (overflow) throw ArithmeticOverflow();
  } else {
    for (long i = 0; i < n; ++i)
      schur_row(R, a, q_rows[i], col_step, col_free, exp, free_count, nullptr, nullptr, out[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elimination

Elimination::Elimination(const IntMatrix& a, std::vector<std::vector<int64_t>> rhs,
                         EliminationOptions opt)
    : mod_(a.modulus()), rows_(a.rows()), cols_(a.cols()) {
  Ring R{mod_};
  for (auto& b : rhs) {
    if (static_cast<int>(b.size()) != rows_) throw Error("right-hand side has wrong length");
    for (auto& x : b) x = R.norm(x);
  }
  rhs_bad_.assign(rhs.size(), false);
  peel(a);
  expand(a);
  // A_PP^{-1} b_P by forward substitution.
  y_.assign(rhs.size(), Vec(pivot_col_.size(), 0));
  for (size_t k = 0; k < rhs.size(); ++k) {
    Vec& y = y_[k];
    for (size_t s = 0; s < pivot_col_.size(); ++s) {
      int r = pivot_row_[s];
      int64_t acc = rhs[k][r];
      for (const auto& e : a.row(r)) {
        int t = col_step_[e.col];
        if (t >= 0 && t != static_cast<int>(s)) acc = R.sub(acc, R.mul(R.norm(e.val), y[t]));
      }
      y[s] = R.mul(acc, pivot_inv_[s]);
    }
  }
  reduce_dense(a, rhs, opt);
}

void Elimination::peel(const IntMatrix& a) {
  Ring R{mod_};
  std::vector<std::vector<int>> col_rows(cols_);
  std::vector<int> unknown(rows_, 0);
  for (int r = 0; r < rows_; ++r) {
    for (const auto& e : a.row(r)) col_rows[e.col].push_back(r);
    unknown[r] = static_cast<int>(a.row(r).size());
  }
  enum : int8_t { kUnknown, kPivot, kFree };
  std::vector<int8_t> state(cols_, kUnknown);
  std::vector<bool> used(rows_, false);
  std::vector<int> ready, pairs;
  for (int r = 0; r < rows_; ++r) {
    if (unknown[r] == 1) ready.push_back(r);
    if (unknown[r] == 2) pairs.push_back(r);
  }
  col_step_.assign(cols_, -1);
  col_free_.assign(cols_, -1);
  int remaining = cols_;
  auto mark_known = [&](int c) {
    --remaining;
    for (int r : col_rows[c]) {
      if (used[r]) continue;
      int u = --unknown[r];
      if (u == 1) ready.push_back(r);
      if (u == 2) pairs.push_back(r);
    }
  };
  auto make_free = [&](int c) {
    state[c] = kFree;
    col_free_[c] = static_cast<int>(free_col_.size());
    free_col_.push_back(c);
    mark_known(c);
  };
  int scan = 0;
  while (remaining > 0) {
    while (!ready.empty()) {
      int r = ready.back();
      ready.pop_back();
      if (used[r] || unknown[r] != 1) continue;
      const SparseEntry* hit = nullptr;
      for (const auto& e : a.row(r))
        if (state[e.col] == kUnknown) hit = &e;
      if (!hit || !R.is_unit(hit->val)) continue;
      int c = hit->col;
      state[c] = kPivot;
      col_step_[c] = static_cast<int>(pivot_col_.size());
      pivot_col_.push_back(c);
      pivot_row_.push_back(r);
      pivot_inv_.push_back(R.inv(R.norm(hit->val)));
      used[r] = true;
      mark_known(c);
    }
    if (remaining == 0) break;
    // Nothing is ready: free one column, preferably one that unlocks a row
    // with a unit coefficient on its other undecided column.
    int chosen = -1;
    while (!pairs.empty() && chosen < 0) {
      int r = pairs.back();
      pairs.pop_back();
      if (used[r] || unknown[r] != 2) continue;
      const SparseEntry* u[2];
      int k = 0;
      for (const auto& e : a.row(r))
        if (state[e.col] == kUnknown) u[k++] = &e;
      if (R.is_unit(u[0]->val)) {
        chosen = u[1]->col;
      } else if (R.is_unit(u[1]->val)) {
        chosen = u[0]->col;
      }
    }
    if (chosen < 0) {
      while (state[scan] != kUnknown) ++scan;
      chosen = scan;
    }
    make_free(chosen);
  }
}

void Elimination::expand(const IntMatrix& a) {
  Ring R{mod_};
  int nf = free_columns();
  exp_.assign(pivot_col_.size(), Vec(nf, 0));
  for (size_t s = 0; s < pivot_col_.size(); ++s) {
    Vec& ex = exp_[s];
    for (const auto& e : a.row(pivot_row_[s])) {
      int f = col_free_[e.col];
      if (f >= 0) {
        ex[f] = R.add(ex[f], R.norm(e.val));
        continue;
      }
      int t = col_step_[e.col];
      if (t == static_cast<int>(s)) continue;
      int64_t coef = R.norm(e.val);
      const Vec& prev = exp_[t];
      for (int j = 0; j < nf; ++j)
        if (prev[j]) ex[j] = R.sub(ex[j], R.mul(coef, prev[j]));
    }
    if (pivot_inv_[s] != 1)
      for (auto& x : ex) x = R.mul(x, pivot_inv_[s]);
  }
}

void Elimination::reduce_dense(const IntMatrix& a, const std::vector<std::vector<int64_t>>& rhs,
                               const EliminationOptions& opt) {
  Ring R{mod_};
  const int nf = free_columns();
  const size_t nk = rhs.size();
  std::vector<int> q_rows;
  {
    std::vector<bool> is_pivot(rows_, false);
    for (int r : pivot_row_) is_pivot[r] = true;
    for (int r = 0; r < rows_; ++r)
      if (!is_pivot[r]) q_rows.push_back(r);
  }

  // Echelon form by insertion: at most one row per pivot column.
  std::vector<Vec> ech;
  std::vector<int> piv(nf, -1);
  auto insert = [&](Vec v) {
    for (int c = 0; c < nf; ++c) {
      if (v[c] == 0) continue;
      if (piv[c] < 0) {
        piv[c] = static_cast<int>(ech.size());
        ech.push_back(std::move(v));
        return;
      }
      eliminate_rows(R, ech[piv[c]], v, c);
    }
    for (size_t k = 0; k < nk; ++k)
      if (v[nf + k] != 0) rhs_bad_[k] = true;
  };

  std::unordered_set<Vec, VecHash> seen;
  std::vector<Vec> chunk_out;
  const long chunk = std::max(1, opt.chunk);
  for (long base = 0; base < static_cast<long>(q_rows.size()); base += chunk) {
    long n = std::min<long>(chunk, static_cast<long>(q_rows.size()) - base);
    chunk_out.assign(n, Vec());
    bool overflow = false;
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (long i = 0; i < n; ++i) {
        try {
          schur_row(R, a, q_rows[base + i], col_step_, col_free_, exp_, nf, &rhs, &y_, chunk_out[i]);
        } catch (const ArithmeticOverflow&) {
#pragma omp atomic write
          overflow = true;
        }
      }
    } else {
      for (long i = 0; i < n; ++i)
        schur_row(R, a, q_rows[base + i], col_step_, col_free_, exp_, nf, &rhs, &y_, chunk_out[i]);
    }
    if (overflow) throw ArithmeticOverflow();
    for (auto& v : chunk_out) {
      bool nonzero = false;
      for (int64_t x : v)
        if (x) {
          nonzero = true;
          break;
        }
      if (!nonzero || !seen.insert(v).second) continue;
      ++schur_rows_;
      insert(v);
    }
  }
  seen.clear();

  // Diagonalize the echelon block; row ops carry the right-hand sides.
  std::sort(ech.begin(), ech.end(), [&](const Vec& x, const Vec& y) {
    auto lead = [&](const Vec& v) {
      int c = 0;
      while (c < nf && v[c] == 0) ++c;
      return c;
    };
    return lead(x) < lead(y);
  });
  block_ = std::move(ech);
  const int nr = static_cast<int>(block_.size());
  auto size_of = [&](int64_t v) -> int64_t {
    if (!mod_) return v < 0 ? -v : v;
    return gcd64(v, mod_) * mod_ + v;  // prefer small gcd with m, then small residue
  };
  auto col_op = [&](int i, int j, int64_t a, int64_t b, int64_t c, int64_t d) {
    a = R.norm(a), b = R.norm(b), c = R.norm(c), d = R.norm(d);
    for (auto& row : block_) {
      int64_t x = row[i], y = row[j];
      if (x == 0 && y == 0) continue;
      row[i] = R.add(R.mul(a, x), R.mul(c, y));
      row[j] = R.add(R.mul(b, x), R.mul(d, y));
    }
    col_log_.push_back({i, j, a, b, c, d});
  };
  const int nd = std::min(nr, nf);
  for (int t = 0; t < nd; ++t) {
    int bi = -1, bj = -1;
    int64_t best = 0;
    for (int i = t; i < nr; ++i)
      for (int j = t; j < nf; ++j) {
        int64_t v = block_[i][j];
        if (v == 0) continue;
        int64_t sz = size_of(v);
        if (bi < 0 || sz < best) bi = i, bj = j, best = sz;
      }
    if (bi < 0) break;
    if (bi != t) std::swap(block_[bi], block_[t]);
    if (bj != t) col_op(t, bj, 0, 1, 1, 0);
    for (;;) {
      for (int i = t + 1; i < nr; ++i) eliminate_rows(R, block_[t], block_[i], t);
      bool row_clear = true;
      for (int j = t + 1; j < nf; ++j) {
        int64_t a = block_[t][t], b = block_[t][j];
        if (b == 0) continue;
        if (a != 0 && b % a == 0) {
          col_op(t, j, 1, -(b / a), 0, 1);
        } else {
          auto [g, s, u] = Ring::egcd(a, b);
          col_op(t, j, s, -(b / g), u, a / g);
          row_clear = false;
        }
      }
      if (row_clear) break;
      bool col_clear = true;
      for (int i = t + 1; i < nr; ++i)
        if (block_[i][t]) col_clear = false;
      if (col_clear) break;
    }
  }
  diag_.assign(nd, 0);
  for (int t = 0; t < nd; ++t) diag_[t] = block_[t][t];

  if (!mod_) {
    for (int t = 0; t < nd; ++t)
      if (diag_[t] < 0) {
        for (auto& row : block_) row[t] = -row[t];
        col_log_.push_back({t, t, -1, 0, 0, 0});
        diag_[t] = -diag_[t];
      }
  } else {
    // Scale by a unit so that each entry becomes gcd(d, m).
    for (int t = 0; t < nd; ++t) {
      int64_t d = diag_[t];
      if (d == 0) continue;
      int64_t g = gcd64(d, mod_), mg = mod_ / g;
      int64_t w = mg == 1 ? 1 : Ring{mg}.inv(mod_floor(d / g, mg));
      while (gcd64(w, mod_) != 1) w += mg;
      if (w == 1) continue;
      for (auto& row : block_) row[t] = R.mul(row[t], w);
      col_log_.push_back({t, t, w, 0, 0, 0});
      diag_[t] = g == mod_ ? 0 : g;
    }
  }
  {
    // Divisibility chain via diag(a, b) ~ diag(gcd, lcm).
    for (int i = 0; i < nd; ++i)
      for (int j = i + 1; j < nd; ++j) {
        int64_t a = diag_[i], b = diag_[j];
        if (a == 0 && b == 0) continue;
        if (a != 0 && b % a == 0) continue;
        auto [g, s, u] = Ring::egcd(a, b);
        // Rows: (s, u; -b/g, a/g).  Columns: (1, -u b/g; 1, s a/g).
        row_op(R, block_[i], block_[j], s, u, -(b / g), a / g);
        int64_t lcm = mul_ck(a / g, b);
        if (mod_ && lcm == mod_) lcm = 0;
        col_log_.push_back({i, j, 1, mul_ck(-u, b / g), 1, mul_ck(s, a / g)});
        diag_[i] = g;
        diag_[j] = lcm < 0 ? -lcm : lcm;
        if (lcm < 0) {
          for (auto& row : block_) row[j] = -row[j];
          col_log_.push_back({j, j, -1, 0, 0, 0});
        }
        block_[i][i] = g, block_[i][j] = 0, block_[j][i] = 0, block_[j][j] = diag_[j];
      }
  }
  // Rows past the diagonal, if any, are zero on the block.
  for (int i = nd; i < nr; ++i)
    for (size_t k = 0; k < nk; ++k)
      if (block_[i][nf + k] != 0) rhs_bad_[k] = true;
}

std::vector<int64_t> Elimination::diagonal() const {
  std::vector<int64_t> d(peeled(), 1);
  d.insert(d.end(), diag_.begin(), diag_.end());
  int full = std::min(rows_, cols_);
  d.resize(full, 0);
  return d;
}

std::vector<int64_t> Elimination::apply_v(std::vector<int64_t> z) const {
  Ring R{mod_};
  for (auto it = col_log_.rbegin(); it != col_log_.rend(); ++it) {
    const Op2& op = *it;
    if (op.i == op.j) {
      z[op.i] = R.mul(op.a, z[op.i]);
      continue;
    }
    int64_t x = z[op.i], y = z[op.j];
    z[op.i] = R.add(R.mul(R.norm(op.a), x), R.mul(R.norm(op.b), y));
    z[op.j] = R.add(R.mul(R.norm(op.c), x), R.mul(R.norm(op.d), y));
  }
  return z;
}

std::vector<int64_t> Elimination::lift_free(const std::vector<int64_t>& x_free, const Vec* y) const {
  Ring R{mod_};
  std::vector<int64_t> x(cols_, 0);
  int nf = free_columns();
  for (int f = 0; f < nf; ++f) x[free_col_[f]] = x_free[f];
  for (size_t s = 0; s < pivot_col_.size(); ++s) {
    int64_t acc = y ? (*y)[s] : 0;
    const Vec& ex = exp_[s];
    for (int f = 0; f < nf; ++f)
      if (ex[f] && x_free[f]) acc = R.sub(acc, R.mul(ex[f], x_free[f]));
    x[pivot_col_[s]] = acc;
  }
  return x;
}

std::vector<int64_t> Elimination::v_column(int pos) const {
  int p = peeled();
  if (pos < 0 || pos >= std::min(rows_, cols_)) throw Error("v_column position out of range");
  if (pos < p) {
    // Pivot columns: V restricted there is A_PP^{-1}-free; use the unit vector.
    std::vector<int64_t> x(cols_, 0);
    x[pivot_col_[pos]] = 1;
    return x;
  }
  int q = pos - p;
  std::vector<int64_t> e(free_columns(), 0);
  if (q < free_columns()) e[q] = 1;
  return lift_free(apply_v(std::move(e)), nullptr);
}

bool Elimination::consistent(int k) const { return solution(k).has_value(); }

std::optional<std::vector<int64_t>> Elimination::solution(int k) const {
  if (k < 0 || k >= rhs_count()) throw Error("no such right-hand side");
  if (rhs_bad_[k]) return std::nullopt;
  int nf = free_columns();
  std::vector<int64_t> z(nf, 0);
  for (size_t t = 0; t < diag_.size(); ++t) {
    int64_t d = diag_[t], c = block_[t][nf + k];
    if (!mod_) {
      if (d == 0) {
        if (c != 0) return std::nullopt;
        continue;
      }
      if (c % d != 0) return std::nullopt;
      z[t] = c / d;
    } else {
      int64_t g = gcd64(d, mod_);
      if (c % g != 0) return std::nullopt;
      int64_t mg = mod_ / g;
      if (mg == 1) continue;
      Ring Rg{mg};
      z[t] = Rg.mul(Rg.norm(c / g), Rg.inv(Rg.norm(d / g)));
    }
  }
  return lift_free(apply_v(std::move(z)), &y_[k]);
}

std::vector<std::vector<int64_t>> Elimination::kernel_basis() const {
  std::vector<std::vector<int64_t>> out;
  int nf = free_columns();
  for (int t = 0; t < nf; ++t) {
    int64_t mult = 1;
    if (t < static_cast<int>(diag_.size())) {
      int64_t d = diag_[t];
      if (!mod_) {
        if (d != 0) continue;
      } else {
        int64_t g = gcd64(d, mod_);
        if (g == 1) continue;
        mult = mod_ / g;
      }
    }
    std::vector<int64_t> e(nf, 0);
    e[t] = mult;
    out.push_back(lift_free(apply_v(std::move(e)), nullptr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense Smith form with explicit transforms

SmithForm smith_normal_form(const IntMatrix& a) {
  if (a.modulus() != 0) throw Error("smith_normal_form works over Z");
  Ring R{0};
  const int nr = a.rows(), nc = a.cols();
  auto A = a.to_dense();
  std::vector<Vec> U(nr, Vec(nr, 0)), Vt(nc, Vec(nc, 0));  // Vt holds V transposed
  for (int i = 0; i < nr; ++i) U[i][i] = 1;
  for (int j = 0; j < nc; ++j) Vt[j][j] = 1;

  auto rop = [&](int i, int j, int64_t p, int64_t q, int64_t r, int64_t s) {
    row_op(R, A[i], A[j], p, q, r, s);
    row_op(R, U[i], U[j], p, q, r, s);
  };
  auto cop = [&](int i, int j, int64_t p, int64_t q, int64_t r, int64_t s) {
    // new col_i = p col_i + r col_j, new col_j = q col_i + s col_j
    for (int k = 0; k < nr; ++k) {
      int64_t x = A[k][i], y = A[k][j];
      A[k][i] = R.add(R.mul(p, x), R.mul(r, y));
      A[k][j] = R.add(R.mul(q, x), R.mul(s, y));
    }
    row_op(R, Vt[i], Vt[j], p, r, q, s);
  };

  const int nd = std::min(nr, nc);
  for (int t = 0; t < nd; ++t) {
    int bi = -1, bj = -1;
    int64_t best = 0;
    for (int i = t; i < nr; ++i)
      for (int j = t; j < nc; ++j) {
        int64_t v = std::llabs(A[i][j]);
        if (v && (bi < 0 || v < best)) bi = i, bj = j, best = v;
      }
    if (bi < 0) break;
    if (bi != t) rop(t, bi, 0, 1, 1, 0);
    if (bj != t) cop(t, bj, 0, 1, 1, 0);
    for (;;) {
      for (int i = t + 1; i < nr; ++i) {
        int64_t x = A[t][t], y = A[i][t];
        if (y == 0) continue;
        if (y % x == 0) {
          rop(t, i, 1, 0, -(y / x), 1);
        } else {
          auto [g, s, u] = Ring::egcd(x, y);
          rop(t, i, s, u, -(y / g), x / g);
        }
      }
      bool done = true;
      for (int j = t + 1; j < nc; ++j) {
        int64_t x = A[t][t], y = A[t][j];
        if (y == 0) continue;
        if (y % x == 0) {
          cop(t, j, 1, -(y / x), 0, 1);
        } else {
          auto [g, s, u] = Ring::egcd(x, y);
          cop(t, j, s, -(y / g), u, x / g);
          done = false;
        }
      }
      if (done) break;
      bool col_clear = true;
      for (int i = t + 1; i < nr; ++i)
        if (A[i][t]) col_clear = false;
      if (col_clear) break;
    }
  }
  std::vector<int64_t> d(nd, 0);
  for (int t = 0; t < nd; ++t) {
    if (A[t][t] < 0) {
      for (auto& x : A[t]) x = -x;
      for (auto& x : U[t]) x = -x;
    }
    d[t] = A[t][t];
  }
  for (int i = 0; i < nd; ++i)
    for (int j = i + 1; j < nd; ++j) {
      int64_t x = d[i], y = d[j];
      if (x == 0 && y == 0) continue;
      if (x != 0 && y % x == 0) continue;
      auto [g, s, u] = Ring::egcd(x, y);
      rop(i, j, s, u, -(y / g), x / g);
      cop(i, j, 1, mul_ck(-u, y / g), 1, mul_ck(s, x / g));
      d[i] = A[i][i];
      if (A[j][j] < 0) {
        for (auto& v : A[j]) v = -v;
        for (auto& v : U[j]) v = -v;
      }
      d[j] = A[j][j];
    }
  SmithForm out;
  out.factors = d;
  out.U = U;
  out.V.assign(nc, Vec(nc, 0));
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) out.V[i][j] = Vt[j][i];
  return out;
}

std::vector<int64_t> invariant_factors(const IntMatrix& a) { return Elimination(a).diagonal(); }

SolveResult solve_linear(const IntMatrix& a, const std::vector<int64_t>& b) {
  Elimination e(a, {b});
  SolveResult r;
  r.solution = e.solution(0);
  if (r.solution) {
    auto check = a.apply(*r.solution);
    Ring R{a.modulus()};
    for (int i = 0; i < a.rows(); ++i)
      if (check[i] != R.norm(b[i])) throw Error("internal: solution failed verification");
  }
  r.kernel = e.kernel_basis();
  return r;
}

}  // namespace dwkit
