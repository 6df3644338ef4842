#include "dwkit/cohomology.hpp"

#include "dwkit/errors.hpp"

#include <optional>

namespace dwkit {

int64_t cohomology_cost(const FiniteGroup& g, int n) {
  __int128 v = n + 3;
  for (int i = 0; i < n + 2; ++i) {
    v *= g.order() - 1;
    if (v > (__int128(1) << 62)) return int64_t(1) << 62;
  }
  return static_cast<int64_t>(v);
}

CohomologyGroup cohomology(const GroupPtr& g, int n, const CohomologyOptions& opt) {
  if (n < 1) throw Error("cohomology degree must be at least 1");
  int64_t cost = cohomology_cost(*g, n);
  if (!opt.allow_large && cost > opt.budget) {
    TupleIndex r(*g, n + 2), c(*g, n + 1);
    throw BudgetExceeded("H^" + std::to_string(n) + " of order " + std::to_string(g->order()) +
                             " needs about " + std::to_string(cost) + " nonzeros (use --allow-large)",
                         r.count(), c.count());
  }
  CohomologyGroup out;
  out.group = g;
  out.degree = n;
  // Exact over Z first.  Torsion of H^{n+1}(G;Z) is killed by |G|, so when
  // the integral elimination overflows the same factors and generators are
  // read off over Z/|G|^2.
  std::optional<Elimination> e;
  if (!opt.force_modular) {
    try {
      e.emplace(coboundary_matrix(*g, n));
    } catch (const ArithmeticOverflow&) {
    }
  }
  if (!e) {
    out.modulus = int64_t(g->order()) * g->order();
    e.emplace(coboundary_matrix(*g, n, out.modulus));
  }
  auto diag = e->diagonal();
  for (size_t pos = 0; pos < diag.size(); ++pos) {
    int64_t f = diag[pos];
    if (f <= 1) continue;
    // V e_pos is an integral n-cochain a with d a divisible by f; a/f is the
    // Bockstein preimage of the torsion class.
    auto a = e->v_column(static_cast<int>(pos));
    Cochain gen = from_normalized_vector(g, n, a, f);
    if (!is_cocycle(gen)) throw Error("internal: cohomology generator is not a cocycle");
    out.factors.push_back(f);
    out.generators.push_back(std::move(gen));
  }
  return out;
}

std::vector<int64_t> CohomologyGroup::classify(const Cochain& c) const {
  if (c.degree() != degree) throw DegreeMismatch(degree, c.degree());
  if (!is_cocycle(c)) throw NotACocycle("cannot classify a non-closed cochain");
  if (factors.empty()) return {};
  int64_t m = c.denominator();
  for (int64_t f : factors) m = lcm64(m, f);
  m = mul_ck(m, group->order());
  // Solve d x + sum_j c_j (m/f_j) a_j = m c over Z/m.
  IntMatrix a = coboundary_matrix(*group, degree - 1, m);
  const int base = a.cols();
  IntMatrix aug(a.rows(), base + static_cast<int>(factors.size()), m);
  for (int r = 0; r < a.rows(); ++r)
    for (const auto& en : a.row(r)) aug.add(r, en.col, en.val);
  for (size_t j = 0; j < factors.size(); ++j) {
    auto col = to_normalized_vector(generators[j], m);
    for (int r = 0; r < a.rows(); ++r)
      if (col[r]) aug.add(r, base + static_cast<int>(j), col[r]);
  }
  auto rhs = to_normalized_vector(c, m);
  Elimination e(aug, {rhs});
  auto x = e.solution(0);
  if (!x) throw Error("internal: class not in the span of the generators");
  std::vector<int64_t> out(factors.size());
  for (size_t j = 0; j < factors.size(); ++j) out[j] = mod_floor((*x)[base + j], factors[j]);
  return out;
}

bool CohomologyGroup::is_trivial(const Cochain& c) const {
  for (int64_t v : classify(c))
    if (v) return false;
  return true;
}

Cochain CohomologyGroup::combination(const std::vector<int64_t>& coeff) const {
  if (coeff.size() != generators.size()) throw Error("wrong number of coefficients");
  Cochain c(group, degree, 1);
  for (size_t j = 0; j < coeff.size(); ++j) c = c + generators[j] * coeff[j];
  return c;
}

int64_t default_modulus(const Cochain& y) { return mul_ck(y.denominator(), y.group()->order()); }

std::vector<std::optional<Cochain>> solve_coboundaries(const std::vector<Cochain>& ys, int64_t modulus) {
  std::vector<std::optional<Cochain>> out;
  if (ys.empty()) return out;
  const GroupPtr& g = ys[0].group();
  const int n = ys[0].degree();
  if (n < 1) throw Error("solve_coboundary needs degree >= 1");
  std::vector<std::vector<int64_t>> rhs;
  for (const auto& y : ys) {
    if (y.degree() != n) throw DegreeMismatch(n, y.degree());
    if (modulus % y.denominator()) throw Error("working modulus is not a multiple of the denominator");
    rhs.push_back(to_normalized_vector(y, modulus));
  }
  IntMatrix a = coboundary_matrix(*g, n - 1, modulus);
  Elimination e(a, rhs);
  for (size_t k = 0; k < ys.size(); ++k) {
    auto x = e.solution(static_cast<int>(k));
    if (!x) {
      out.emplace_back(std::nullopt);
      continue;
    }
    Cochain c = from_normalized_vector(g, n - 1, *x, modulus);
    if (coboundary(c) != ys[k]) throw Error("internal: coboundary witness failed verification");
    out.emplace_back(std::move(c));
  }
  return out;
}

std::optional<Cochain> solve_coboundary(const Cochain& y, std::optional<int64_t> modulus) {
  if (y.degree() < 1) throw Error("solve_coboundary needs degree >= 1");
  if (y.is_zero()) return Cochain(y.group(), y.degree() - 1, 1);
  return solve_coboundaries({y}, modulus ? *modulus : default_modulus(y))[0];
}

}  // namespace dwkit
