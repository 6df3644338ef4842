#include "dwkit/anomaly.hpp"

#include <chrono>
#include <functional>
#include <numeric>

#include "dwkit/cohomology.hpp"
#include "dwkit/errors.hpp"
#include "dwkit/groupoid.hpp"
#include "dwkit/linalg.hpp"

namespace dwkit {

namespace {

std::string str(int x) { return std::to_string(x); }

// Copies the entries of `src` into `dst` at a row and column offset.
void place(IntMatrix& dst, const IntMatrix& src, int row0, int col0, int64_t sign = 1) {
  for (int r = 0; r < src.rows(); ++r)
    for (const auto& e : src.row(r)) dst.add(row0 + r, col0 + e.col, sign * e.val);
}

GroupHom automorphism(const GroupPtr& d, const std::vector<int>& table) { return GroupHom(d, d, table); }

// Extends gens[i] -> images[i] along right multiplication; nullopt if the
// assignment is inconsistent or the generators do not reach every element.
std::optional<std::vector<int>> extend_homomorphism(const FiniteGroup& src, const FiniteGroup& tgt,
                                                    const std::vector<int>& gens, const std::vector<int>& images) {
  std::vector<int> map(src.order(), -1);
  map[src.identity()] = tgt.identity();
  std::vector<int> queue{src.identity()};
  for (size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (size_t i = 0; i < gens.size(); ++i) {
      const int y = src.mul(x, gens[i]);
      const int img = tgt.mul(map[x], images[i]);
      if (map[y] < 0) {
        map[y] = img;
        queue.push_back(y);
      } else if (map[y] != img) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<int>(queue.size()) != src.order()) return std::nullopt;
  return map;
}

// Backtracking over candidate images of each generator; accepts the first
// bijective homomorphism.
std::optional<std::vector<int>> search_isomorphism(const FiniteGroup& a, const FiniteGroup& b,
                                                   const std::vector<int>& gens,
                                                   const std::vector<std::vector<int>>& candidates) {
  if (a.order() != b.order()) return std::nullopt;
  std::vector<int> images(gens.size());
  std::function<std::optional<std::vector<int>>(size_t)> rec = [&](size_t i) -> std::optional<std::vector<int>> {
    if (i == gens.size()) {
      auto map = extend_homomorphism(a, b, gens, images);
      if (!map) return std::nullopt;
      std::vector<bool> hit(b.order(), false);
      for (int v : *map) {
        if (hit[v]) return std::nullopt;
        hit[v] = true;
      }
      return map;
    }
    for (int c : candidates[i]) {
      if (a.element_order(gens[i]) != b.element_order(c)) continue;
      images[i] = c;
      if (auto r = rec(i + 1)) return r;
    }
    return std::nullopt;
  };
  return rec(0);
}

std::vector<int> inverse_on_image(const GroupHom& iota) {
  std::vector<int> inv(iota.target()->order(), -1);
  for (int d = 0; d < iota.source()->order(); ++d) inv[iota(d)] = d;
  return inv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Non-abelian cocycles and extensions

void NonAbelianCocycle::validate() const {
  const FiniteGroup& g = *G;
  const FiniteGroup& d = *D;
  if (static_cast<int>(alpha.size()) != g.order() || static_cast<int>(sigma.size()) != g.order())
    throw InvalidCocycle("tables must have one entry per element of G");
  for (int x = 0; x < g.order(); ++x) {
    if (static_cast<int>(alpha[x].size()) != d.order() || static_cast<int>(sigma[x].size()) != g.order())
      throw InvalidCocycle("table row of the wrong length");
    try {
      GroupHom a(D, D, alpha[x]);
      if (!a.injective()) throw InvalidCocycle("alpha(" + g.element_name(x) + ") is not bijective");
    } catch (const InvalidCocycle&) {
      throw;
    } catch (const Error&) {
      throw InvalidCocycle("alpha(" + g.element_name(x) + ") is not a homomorphism");
    }
  }
  for (int y = 0; y < d.order(); ++y)
    if (alpha[g.identity()][y] != y) throw InvalidCocycle("alpha(1) = id fails");
  if (sigma[g.identity()][g.identity()] != d.identity()) throw InvalidCocycle("sigma(1,1) = 1 fails");
  for (int g1 = 0; g1 < g.order(); ++g1)
    for (int g2 = 0; g2 < g.order(); ++g2) {
      const int s = sigma[g1][g2];
      const int g12 = g.mul(g1, g2);
      for (int y = 0; y < d.order(); ++y)
        if (alpha[g12][y] != d.mul(d.mul(d.inv(s), alpha[g1][alpha[g2][y]]), s))
          throw InvalidCocycle("alpha(g1 g2) = sigma^-1 alpha(g1) alpha(g2) sigma fails at (" + str(g1) + "," +
                               str(g2) + "," + str(y) + ")");
      for (int g3 = 0; g3 < g.order(); ++g3)
        if (d.mul(s, sigma[g12][g3]) != d.mul(alpha[g1][sigma[g2][g3]], sigma[g1][g.mul(g2, g3)]))
          throw InvalidCocycle("sigma associativity fails at (" + str(g1) + "," + str(g2) + "," + str(g3) + ")");
    }
}

void Extension::validate() const {
  if (iota.source() != D || iota.target() != Ghat || lambda.source() != Ghat || lambda.target() != G)
    throw InvalidExtension("maps do not match the groups");
  if (!iota.injective()) throw InvalidExtension("iota is not injective");
  if (!lambda.surjective()) throw InvalidExtension("lambda is not surjective");
  std::vector<bool> in_image(Ghat->order(), false);
  for (int d = 0; d < D->order(); ++d) in_image[iota(d)] = true;
  for (int x = 0; x < Ghat->order(); ++x)
    if (in_image[x] != (lambda(x) == G->identity())) throw InvalidExtension("image(iota) != kernel(lambda)");
  if (static_cast<int>(section.size()) != G->order()) throw SectionNotValid("section has the wrong length");
  for (int g = 0; g < G->order(); ++g) {
    if (section[g] < 0 || section[g] >= Ghat->order()) throw SectionNotValid("section value out of range");
    if (lambda(section[g]) != g) throw SectionNotValid("lambda(s(" + G->element_name(g) + ")) != " + G->element_name(g));
  }
  if (section[G->identity()] != Ghat->identity()) throw SectionNotValid("s(1) != 1");
}

Extension make_extension(GroupPtr D, GroupPtr Ghat, GroupPtr G, std::vector<int> iota, std::vector<int> lambda,
                         std::vector<int> section) {
  GroupHom i(D, Ghat, std::move(iota));
  GroupHom l(Ghat, G, std::move(lambda));
  if (section.empty()) {
    section.assign(G->order(), -1);
    for (int x = Ghat->order(); x-- > 0;) section[l(x)] = x;
    section[G->identity()] = Ghat->identity();
  }
  Extension e{std::move(D), std::move(Ghat), std::move(G), std::move(i), std::move(l), std::move(section)};
  e.validate();
  return e;
}

Extension extension_from_normal_subgroup(const GroupPtr& ghat, const std::vector<int>& normal) {
  const FiniteGroup& h = *ghat;
  std::vector<int> pos(h.order(), -1);
  for (size_t i = 0; i < normal.size(); ++i) pos[normal[i]] = static_cast<int>(i);
  if (pos[h.identity()] < 0) throw InvalidExtension("subgroup lacks the identity");
  for (int n : normal)
    for (int x = 0; x < h.order(); ++x)
      if (pos[h.conj(x, n)] < 0) throw InvalidExtension("subgroup is not normal");
  const int k = static_cast<int>(normal.size());
  std::vector<std::vector<int>> dt(k, std::vector<int>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      int p = pos[h.mul(normal[a], normal[b])];
      if (p < 0) throw InvalidExtension("subgroup is not closed");
      dt[a][b] = p;
    }
  GroupPtr D = make_group(FiniteGroup::from_table(k, dt, h.label() + "_N"));
  // Cosets in order of their smallest element.
  std::vector<int> coset(h.order(), -1), reps;
  for (int x = 0; x < h.order(); ++x) {
    if (coset[x] >= 0) continue;
    for (int n : normal) coset[h.mul(x, n)] = static_cast<int>(reps.size());
    reps.push_back(x);
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> gt(q, std::vector<int>(q));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) gt[a][b] = coset[h.mul(reps[a], reps[b])];
  GroupPtr G = make_group(FiniteGroup::from_table(q, gt, h.label() + "/N"));
  return make_extension(D, ghat, G, normal, coset, reps);
}

Extension extension_from_cocycle(const NonAbelianCocycle& nc) {
  nc.validate();
  const FiniteGroup& g = *nc.G;
  const FiniteGroup& d = *nc.D;
  const int nd = d.order(), ng = g.order(), n = nd * ng;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int d2 = x % nd, g2 = x / nd, d1 = y % nd, g1 = y / nd;
      const int dd = d.mul(d.mul(d2, nc.alpha[g2][d1]), nc.sigma[g2][g1]);
      t[x][y] = dd + nd * g.mul(g2, g1);
    }
  GroupPtr ghat = make_group(FiniteGroup::from_table(n, t, "ext"));
  std::vector<int> iota(nd), lambda(n), section(ng);
  for (int y = 0; y < nd; ++y) iota[y] = y + nd * g.identity();
  for (int x = 0; x < n; ++x) lambda[x] = x / nd;
  for (int x = 0; x < ng; ++x) section[x] = d.identity() + nd * x;
  return make_extension(nc.D, ghat, nc.G, iota, lambda, section);
}

NonAbelianCocycle cocycle_from_extension(const Extension& ext) {
  ext.validate();
  const FiniteGroup& h = *ext.Ghat;
  const FiniteGroup& g = *ext.G;
  const auto inv = inverse_on_image(ext.iota);
  NonAbelianCocycle nc{ext.G, ext.D, {}, {}};
  nc.alpha.assign(g.order(), std::vector<int>(ext.D->order()));
  nc.sigma.assign(g.order(), std::vector<int>(g.order()));
  for (int x = 0; x < g.order(); ++x)
    for (int y = 0; y < ext.D->order(); ++y) nc.alpha[x][y] = inv[h.conj(ext.section[x], ext.iota(y))];
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b) {
      int v = h.mul(h.mul(ext.section[a], ext.section[b]), h.inv(ext.section[g.mul(a, b)]));
      nc.sigma[a][b] = inv[v];
    }
  return nc;
}

std::optional<std::vector<int>> find_isomorphism(const GroupPtr& a, const GroupPtr& b) {
  if (a->order() != b->order()) return std::nullopt;
  std::vector<int> all(a->order());
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> gens = a->generators_of(all);
  std::vector<int> every(b->order());
  std::iota(every.begin(), every.end(), 0);
  return search_isomorphism(*a, *b, gens, std::vector<std::vector<int>>(gens.size(), every));
}

std::optional<std::vector<int>> extension_equivalence(const Extension& a, const Extension& b) {
  if (a.D->order() != b.D->order() || a.G->order() != b.G->order() || a.Ghat->order() != b.Ghat->order())
    return std::nullopt;
  if (!a.D->same_table(*b.D) || !a.G->same_table(*b.G)) return std::nullopt;
  std::vector<int> gens;
  std::vector<std::vector<int>> cand;
  std::vector<int> all_d(a.D->order()), all_g(a.G->order());
  std::iota(all_d.begin(), all_d.end(), 0);
  std::iota(all_g.begin(), all_g.end(), 0);
  for (int d : a.D->generators_of(all_d)) {
    gens.push_back(a.iota(d));
    cand.push_back({b.iota(d)});
  }
  for (int g : a.G->generators_of(all_g)) {
    gens.push_back(a.section[g]);
    std::vector<int> c;
    for (int x = 0; x < b.Ghat->order(); ++x)
      if (b.lambda(x) == g) c.push_back(x);
    cand.push_back(c);
  }
  auto map = search_isomorphism(*a.Ghat, *b.Ghat, gens, cand);
  if (!map) return std::nullopt;
  for (int x = 0; x < a.Ghat->order(); ++x)
    if (b.lambda((*map)[x]) != a.lambda(x)) return std::nullopt;
  return map;
}

Extension cyclic_extension(int n, int m) {
  GroupPtr d = cyclic_group(n), h = cyclic_group(n * m), g = cyclic_group(m);
  std::vector<int> iota(n), lambda(n * m), section(m);
  for (int a = 0; a < n; ++a) iota[a] = m * a;
  for (int a = 0; a < n * m; ++a) lambda[a] = a % m;
  for (int a = 0; a < m; ++a) section[a] = a;
  return make_extension(d, h, g, iota, lambda, section);
}

Extension cyclic_square_extension(int n, int m) {
  GroupPtr d = product_group({cyclic_group(n), cyclic_group(n)});
  GroupPtr h = product_group({cyclic_group(n * m), cyclic_group(n * m)});
  GroupPtr g = product_group({cyclic_group(m), cyclic_group(m)});
  const int nm = n * m;
  std::vector<int> iota(n * n), lambda(nm * nm), section(m * m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) iota[a * n + b] = (m * a) * nm + m * b;
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b) lambda[a * nm + b] = (a % m) * m + b % m;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) section[a * m + b] = a * nm + b;
  return make_extension(d, h, g, iota, lambda, section);
}

Extension pauli_extension() {
  GroupPtr d8 = dihedral_group(8), p1 = pauli_group(), z2 = cyclic_group(2);
  std::vector<int> iota(8), lambda(16);
  for (int d = 0; d < 8; ++d) iota[d] = d;
  for (int x = 0; x < 16; ++x) lambda[x] = x / 8;
  return make_extension(d8, p1, z2, iota, lambda, {0, 8});
}

Extension shear_extension(int n, int m) {
  if (n < 1 || m < 1 || m % n) throw InvalidExtension("shear extension needs N | M");
  GroupPtr d = product_group({cyclic_group(n), cyclic_group(n)});
  NonAbelianCocycle nc{cyclic_group(m), d, std::vector<std::vector<int>>(m, std::vector<int>(n * n)),
                       std::vector<std::vector<int>>(m, std::vector<int>(m))};
  for (int g = 0; g < m; ++g)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) nc.alpha[g][x * n + y] = x * n + (y + g * x) % n;
  for (int g = 0; g < m; ++g)
    for (int h = 0; h < m; ++h) nc.sigma[g][h] = ((g + h) / m) % n;
  return extension_from_cocycle(nc);
}

// ---------------------------------------------------------------------------
// Obstructions

InvarianceResult is_invariant_class(const Extension& ext, const Cochain& omega) {
  if (!is_cocycle(omega)) throw NotACocycle("invariance input");
  const NonAbelianCocycle nc = cocycle_from_extension(ext);
  const FiniteGroup& g = *ext.G;
  InvarianceResult out;
  for (int x = 0; x < g.order(); ++x) {
    Cochain y = omega - pullback(automorphism(ext.D, nc.alpha[g.inv(x)]), omega);
    auto phi = solve_coboundary(y);
    if (!phi) {
      out.phi.clear();
      return out;
    }
    out.phi.push_back(*phi);
  }
  out.invariant = true;
  return out;
}

Cochain sigma_term(const Extension& ext, const Cochain& omega, int g1, int g2) {
  const NonAbelianCocycle nc = cocycle_from_extension(ext);
  const FiniteGroup& g = *ext.G;
  const int a1 = g.inv(g1), a2 = g.inv(g2);
  const int eta = nc.sigma[a2][a1];
  std::vector<int> map(ext.D->order());
  for (int d = 0; d < ext.D->order(); ++d) map[d] = nc.alpha[a2][nc.alpha[a1][d]];
  return prism_pairing(omega, eta, ext.D, map);
}

Cochain coherence_defect(const Extension& ext, const Cochain& omega, const std::vector<Cochain>& phi, int g1, int g2) {
  const NonAbelianCocycle nc = cocycle_from_extension(ext);
  const FiniteGroup& g = *ext.G;
  return phi[g1] + pullback(automorphism(ext.D, nc.alpha[g.inv(g1)]), phi[g2]) - phi[g.mul(g1, g2)] -
         sigma_term(ext, omega, g1, g2);
}

int64_t default_joint_modulus(const Extension& ext, const Cochain& omega) {
  return mul_ck(omega.denominator(), ext.Ghat->order());
}

FirstObstructionResult is_first_obstruction_trivial(const Extension& ext, const Cochain& omega,
                                                    const std::vector<Cochain>& phi_prime,
                                                    std::optional<int64_t> modulus) {
  const int n = omega.degree();
  if (n < 1) throw Error("first obstruction needs degree >= 1");
  const FiniteGroup& g = *ext.G;
  const FiniteGroup& d = *ext.D;
  const int ng = g.order();
  if (static_cast<int>(phi_prime.size()) != ng) throw Error("need one Phi' per element of G");
  // In degree 1 the d2 differential already lands in H^2(G;U(1)); it is the
  // anomaly itself, not an obstruction to the boundary pair.
  if (n == 1) return FirstObstructionResult{true, phi_prime, 0};
  const NonAbelianCocycle nc = cocycle_from_extension(ext);

  std::vector<Cochain> u;
  int64_t den = omega.denominator();
  for (const auto& p : phi_prime) den = lcm64(den, p.denominator());
  for (int g1 = 0; g1 < ng; ++g1)
    for (int g2 = 0; g2 < ng; ++g2) {
      u.push_back(coherence_defect(ext, omega, phi_prime, g1, g2));
      if (!is_cocycle(u.back())) throw Error("coherence defect is not closed; convention mismatch");
      den = lcm64(den, u.back().denominator());
    }
  FirstObstructionResult out;
  out.modulus = modulus ? *modulus : mul_ck(den, ext.Ghat->order());
  const int64_t M = out.modulus;
  if (M % den) throw Error("modulus is not a multiple of the denominators");

  const TupleIndex t1(d, n - 1), t0(d, std::max(n - 2, 0));
  const bool with_beta = n >= 3;
  const int c1 = static_cast<int>(t1.count());
  const int c0 = with_beta ? static_cast<int>(t0.count()) : 0;
  const IntMatrix d1 = coboundary_matrix(d, n - 1, M);
  const int closed_rows = d1.rows();
  const int cols = ng * c1 + ng * ng * c0;
  const int rows = ng * closed_rows + ng * ng * c1;
  IntMatrix a(rows, cols, M);
  std::vector<int64_t> b(rows, 0);
  for (int x = 0; x < ng; ++x) place(a, d1, x * closed_rows, x * c1);
  IntMatrix d0;
  if (with_beta) d0 = coboundary_matrix(d, n - 2, M);
  std::vector<int> t(n - 1), s(n - 1);
  for (int g1 = 0; g1 < ng; ++g1)
    for (int g2 = 0; g2 < ng; ++g2) {
      const auto& a_inv = nc.alpha[g.inv(g1)];
      const Cochain uM = u[g1 * ng + g2].rescaled(M);
      const int row0 = ng * closed_rows + (g1 * ng + g2) * c1;
      const int beta0 = ng * c1 + (g1 * ng + g2) * c0;
      for (int i = 0; i < c1; ++i) {
        t1.tuple(i, t.data());
        for (int j = 0; j < n - 1; ++j) s[j] = a_inv[t[j]];
        a.add(row0 + i, g1 * c1 + i, 1);
        a.add(row0 + i, g2 * c1 + static_cast<int>(t1.index(s.data())), 1);
        a.add(row0 + i, g.mul(g1, g2) * c1 + i, -1);
        b[row0 + i] = mod_floor(-uM.numerator(uM.key(t)), M);
      }
      if (with_beta)
        for (int i = 0; i < c1; ++i)
          for (const auto& e : d0.row(i)) a.add(row0 + i, beta0 + e.col, -e.val);
    }
  auto sol = solve_linear(a, b).solution;
  if (!sol) return out;
  out.trivial = true;
  for (int x = 0; x < ng; ++x) {
    std::vector<int64_t> v(sol->begin() + x * c1, sol->begin() + (x + 1) * c1);
    out.phi.push_back(phi_prime[x] + from_normalized_vector(ext.D, n - 1, v, M));
  }
  // Re-check: the corrected family is coherent up to coboundaries.
  for (int g1 = 0; g1 < ng; ++g1)
    for (int g2 = 0; g2 < ng; ++g2) {
      Cochain rest = coherence_defect(ext, omega, out.phi, g1, g2);
      if (with_beta) {
        const int beta0 = ng * c1 + (g1 * ng + g2) * c0;
        std::vector<int64_t> v(sol->begin() + beta0, sol->begin() + beta0 + c0);
        rest = rest - coboundary(from_normalized_vector(ext.D, n - 2, v, M));
      }
      if (!rest.is_zero()) throw Error("first obstruction witness failed verification");
    }
  return out;
}

LiftResult find_closed_lift(const Extension& ext, const Cochain& omega, std::optional<int64_t> modulus) {
  if (!is_cocycle(omega)) throw NotACocycle("closed lift input");
  const int n = omega.degree();
  const FiniteGroup& h = *ext.Ghat;
  LiftResult out;
  out.modulus = modulus ? *modulus : default_joint_modulus(ext, omega);
  const int64_t M = out.modulus;
  if (M % omega.denominator()) throw Error("modulus is not a multiple of the denominator");
  IntMatrix a = coboundary_matrix(h, n, M);
  const int closed_rows = a.rows();
  std::vector<int64_t> b(closed_rows, 0);
  const TupleIndex td(*ext.D, n), th(h, n);
  const Cochain wM = omega.rescaled(M);
  std::vector<int> t(n), s(n);
  for (int64_t i = 0; i < td.count(); ++i) {
    td.tuple(i, t.data());
    for (int j = 0; j < n; ++j) s[j] = ext.iota(t[j]);
    int r = a.add_row();
    a.add(r, static_cast<int>(th.index(s.data())), 1);
    b.push_back(wM.numerator(wM.key(t)));
  }
  auto sol = solve_linear(a, b).solution;
  if (!sol) return out;
  Cochain lift = from_normalized_vector(ext.Ghat, n, *sol, M);
  if (!is_cocycle(lift) || pullback(ext.iota, lift) != omega) throw Error("closed lift failed verification");
  out.lift = std::move(lift);
  return out;
}

void check_boundary_pair(const Extension& ext, const Cochain& omega_prime, const Cochain& theta) {
  if (omega_prime.group()->order() != ext.Ghat->order() || theta.group()->order() != ext.G->order())
    throw NotABoundaryPair("cochains live on the wrong groups");
  if (theta.degree() != omega_prime.degree() + 1) throw NotABoundaryPair("theta must have degree deg omega' + 1");
  if (!is_cocycle(theta)) throw NotABoundaryPair("theta is not closed");
  if (coboundary(omega_prime) != pullback(ext.lambda, theta)) throw NotABoundaryPair("d omega' != lambda^* theta");
}

BoundaryPairResult find_boundary_pair(const Extension& ext, const Cochain& omega, std::optional<int64_t> modulus) {
  if (!is_cocycle(omega)) throw NotACocycle("boundary pair input");
  const int n = omega.degree();
  const FiniteGroup& h = *ext.Ghat;
  const FiniteGroup& g = *ext.G;
  BoundaryPairResult out;
  out.modulus = modulus ? *modulus : default_joint_modulus(ext, omega);
  const int64_t M = out.modulus;
  if (M % omega.denominator()) throw Error("modulus is not a multiple of the denominator");
  const IntMatrix dh = coboundary_matrix(h, n, M);
  const IntMatrix dg = coboundary_matrix(g, n + 1, M);
  const TupleIndex th1(h, n + 1), tg1(g, n + 1), td(*ext.D, n), th(h, n);
  const int cw = dh.cols(), ct = dg.cols();
  IntMatrix a(dh.rows() + dg.rows(), cw + ct, M);
  place(a, dh, 0, 0);
  place(a, dg, dh.rows(), cw);
  std::vector<int> t(n + 1), s(n + 1);
  for (int64_t r = 0; r < th1.count(); ++r) {
    th1.tuple(r, t.data());
    for (int j = 0; j <= n; ++j) s[j] = ext.lambda(t[j]);
    int64_t c = tg1.index(s.data());
    if (c >= 0) a.add(static_cast<int>(r), cw + static_cast<int>(c), -1);
  }
  std::vector<int64_t> b(a.rows(), 0);
  const Cochain wM = omega.rescaled(M);
  t.resize(n);
  s.resize(n);
  for (int64_t i = 0; i < td.count(); ++i) {
    td.tuple(i, t.data());
    for (int j = 0; j < n; ++j) s[j] = ext.iota(t[j]);
    int r = a.add_row();
    a.add(r, static_cast<int>(th.index(s.data())), 1);
    b.push_back(wM.numerator(wM.key(t)));
  }
  auto sol = solve_linear(a, b).solution;
  if (!sol) return out;
  std::vector<int64_t> vw(sol->begin(), sol->begin() + cw), vt(sol->begin() + cw, sol->end());
  BoundaryPair p{from_normalized_vector(ext.Ghat, n, vw, M), from_normalized_vector(ext.G, n + 1, vt, M), {}, {}};
  check_boundary_pair(ext, p.omega_prime, p.theta);
  if (pullback(ext.iota, p.omega_prime) != omega) throw Error("boundary pair failed verification");
  CohomologyGroup hg = cohomology(ext.G, n + 1);
  p.theta_factors = hg.factors;
  p.theta_class = hg.classify(p.theta);
  out.pair = std::move(p);
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::anomaly_free: return "anomaly_free";
    case Verdict::thooft_anomalous_with_bulk: return "thooft_anomalous_with_bulk";
    case Verdict::invariance_fails: return "invariance_fails";
    case Verdict::first_obstruction_fails: return "first_obstruction_fails";
    case Verdict::higher_obstruction_fails: return "higher_obstruction_fails";
  }
  return "unknown";
}

ObstructionReport anomaly_report(const Extension& ext, const Cochain& omega, int64_t modulus_multiplier) {
  const auto start = std::chrono::steady_clock::now();
  ObstructionReport r;
  auto done = [&](Verdict v) {
    r.verdict = v;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  if (modulus_multiplier < 1) throw Error("modulus multiplier must be positive");
  InvarianceResult inv = is_invariant_class(ext, omega);
  r.invariant_class = inv.invariant;
  if (!inv.invariant) return done(Verdict::invariance_fails);
  r.phi_prime = inv.phi;
  FirstObstructionResult fo = is_first_obstruction_trivial(ext, omega, inv.phi);
  r.first_obstruction_trivial = fo.trivial;
  r.obstruction_modulus = fo.modulus;
  if (!fo.trivial) return done(Verdict::first_obstruction_fails);
  r.phi = fo.phi;
  const int64_t M = mul_ck(default_joint_modulus(ext, omega), modulus_multiplier);
  LiftResult lift = find_closed_lift(ext, omega, M);
  r.lift_modulus = lift.modulus;
  if (lift.lift) {
    r.closed_lift = lift.lift;
    CohomologyGroup hg = cohomology(ext.G, omega.degree() + 1);
    r.boundary_pair =
        BoundaryPair{*lift.lift, Cochain(ext.G, omega.degree() + 1), hg.factors, std::vector<int64_t>(hg.factors.size(), 0)};
    return done(Verdict::anomaly_free);
  }
  BoundaryPairResult pair = find_boundary_pair(ext, omega, M);
  r.pair_modulus = pair.modulus;
  if (pair.pair) {
    r.boundary_pair = pair.pair;
    return done(Verdict::thooft_anomalous_with_bulk);
  }
  return done(Verdict::higher_obstruction_fails);
}

// ---------------------------------------------------------------------------
// Relative theory on tori

Cyclotomic relative_partition_torus(const Extension& ext, const Cochain& omega_prime, const Cochain& theta,
                                    const std::vector<int>& phi) {
  check_boundary_pair(ext, omega_prime, theta);
  const int n = omega_prime.degree();
  if (static_cast<int>(phi.size()) != n) throw DegreeMismatch(n, static_cast<int>(phi.size()));
  const FiniteGroup& g = *ext.G;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.commute(phi[i], phi[j])) throw NonCommuting(phi[i], phi[j]);
  GaugeGroupoid up(ext.Ghat, n), down(ext.G, n);
  Functor f = induced_functor(ext.lambda, up, down);
  HomotopyFiber fib = homotopy_fiber(f, down.object_of(phi));
  return integrate(fib.groupoid, [&](int o) {
    const std::vector<int>& lifted = up.tuple(fib.base_object[o]);
    std::vector<int> base(n);
    for (int i = 0; i < n; ++i) base[i] = ext.lambda(lifted[i]);
    // h: lambda(phi_hat) -> phi is conjugation by k; the prism along k^-1
    // runs from the cycle of lambda(phi_hat) to the cycle of phi.
    const int k = down.conjugator(fib.path[o]);
    PhaseValue v = evaluate(omega_prime, torus_fundamental_cycle(ext.Ghat, lifted)) +
                   evaluate(theta, prism(torus_fundamental_cycle(ext.G, base), g.inv(k)));
    return Cyclotomic::phase(v);
  });
}

ProjectiveStateCocycle projective_state_cocycle(const Extension& ext, const Cochain& omega_prime,
                                                const Cochain& theta) {
  check_boundary_pair(ext, omega_prime, theta);
  const int k = omega_prime.degree() - 1;
  if (k < 1) throw Error("projective state cocycle needs deg omega' >= 2");
  const FiniteGroup& g = *ext.G;
  const FiniteGroup& h = *ext.Ghat;
  const int ng = g.order();
  const int sign = k % 2 ? -1 : 1;

  LoopCochain line = transgress_iterated(omega_prime, k);   // degree 1 on Bun_Ghat(T^k)
  LoopCochain big_theta = transgress_iterated(theta, k);    // degree 2 on Bun_G(T^k)
  const LoopObjects& up = *line.objects();
  const LoopObjects& down = *big_theta.objects();
  std::vector<int> below(up.count());
  for (int o = 0; o < up.count(); ++o) {
    std::vector<int> t = up.tuple(o);
    for (int& x : t) x = ext.lambda(x);
    below[o] = down.find(t);
  }
  // Fibre objects (phi_hat, x) with x: lambda(phi_hat) -> t, index o * |G| + x.
  const int fibre = up.count() * ng;
  auto sector = [&](int f) { return down.act(below[f / ng], f % ng); };
  auto act = [&](int f, int gh) {
    const int o = f / ng, x = f % ng;
    return up.act(o, gh) * ng + g.mul(g.inv(ext.lambda(gh)), x);
  };
  auto theta_at = [&](int obj, int a, int b) { return big_theta.at(obj, {a, b}); };
  auto phase = [&](int f, int gh) {
    const int o = f / ng, x = f % ng;
    const int a = ext.lambda(gh);
    PhaseValue c = theta_at(below[o], a, g.mul(g.inv(a), x));
    return line.at(o, {gh}) - (sign > 0 ? c : -c);
  };
  TwistedOrbits orb = twisted_orbits(fibre, ext.Ghat, act, phase);
  (void)h;

  ProjectiveStateCocycle out{k, std::vector<int>(down.count(), 0), LoopCochain(big_theta.objects(), 2, 1),
                             big_theta, sign, false};
  for (int b : orb.basis) ++out.dims[sector(orb.rep[b])];

  // rho_t(y): V_t -> V_{t^y}, (phi_hat, x) -> (phi_hat, x y) with phase sign * Theta(lambda phi_hat; x, y).
  auto transfer = [&](int f, int y) {
    const int o = f / ng, x = f % ng;
    PhaseValue c = theta_at(below[o], x, y);
    return std::make_pair(o * ng + g.mul(x, y), sign > 0 ? c : -c);
  };
  // Column of rho(y) for basis orbit `orbit`: target orbit and phase, after
  // checking that the transformed section is parallel.
  std::vector<std::vector<int>> members(orb.rep.size());
  for (int f = 0; f < fibre; ++f) members[orb.orbit_of[f]].push_back(f);
  auto column = [&](int orbit, int y) {
    const int r = orb.rep[orbit];
    auto [img, c] = transfer(r, y);
    const int target = orb.orbit_of[img];
    if (!orb.trivial[target]) throw Error("sector transfer lands on an orbit with nontrivial character");
    const PhaseValue coeff = c - orb.transport[img];
    for (int f : members[orbit]) {
      auto [img2, c2] = transfer(f, y);
      if (orb.orbit_of[img2] != target || orb.transport[f] + c2 != coeff + orb.transport[img2])
        throw Error("transferred section is not parallel");
    }
    return std::make_pair(target, coeff);
  };

  int64_t den = 1;
  std::vector<std::vector<int>> sector_basis(down.count());
  for (int b : orb.basis) sector_basis[sector(orb.rep[b])].push_back(b);
  std::vector<std::vector<PhaseValue>> values(down.count(), std::vector<PhaseValue>(big_theta.stride()));
  for (int t = 0; t < down.count(); ++t) {
    if (sector_basis[t].empty()) continue;
    for (int y = 0; y < ng; ++y)
      for (int z = 0; z < ng; ++z) {
        if (y == g.identity() || z == g.identity()) continue;
        std::optional<PhaseValue> d;
        for (int orbit : sector_basis[t]) {
          auto [mid, c1] = column(orbit, y);
          auto [end, c2] = column(mid, z);
          auto [direct, c3] = column(orbit, g.mul(y, z));
          if (end != direct) throw Error("projective action does not compose up to phases");
          PhaseValue v = c1 + c2 - c3;
          if (d && *d != v) throw Error("composition defect is not a scalar on the sector");
          d = v;
        }
        values[t][big_theta.key({y, z})] = *d;
        den = lcm64(den, d->denominator());
      }
  }
  LoopCochain defect(big_theta.objects(), 2, den);
  for (int t = 0; t < down.count(); ++t)
    for (uint64_t key = 0; key < defect.stride(); ++key)
      if (!sector_basis[t].empty() && !defect.is_degenerate(key))
        defect.set_numerator(t, key, values[t][key].rescaled(den).numerator());
  out.defect = defect;

  std::vector<bool> support(down.count());
  for (int t = 0; t < down.count(); ++t) support[t] = out.dims[t] > 0;
  LoopCochain target = sign > 0 ? big_theta : -big_theta;
  out.same_class = solve_loop_coboundary(defect - target, support).has_value();
  return out;
}

}  // namespace dwkit
