#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <numeric>

#include "qtb/affine.hpp"
#include "qtb/error.hpp"

namespace qtb {

namespace {

std::vector<std::size_t> complement(const std::vector<std::size_t> &keep, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t i) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) out.push_back(j);
  return out;
}

Vec restrict_vec(const Vec &e, const std::vector<std::size_t> &keep) {
  Vec r;
  for (auto i : keep) r.push_back(e[i]);
  return r;
}

Vec embed_vec(const Vec &e, const std::vector<std::size_t> &keep, std::size_t n) {
  Vec r(n, 0);
  for (std::size_t k = 0; k < keep.size(); ++k) r[keep[k]] = e[k];
  return r;
}

Laurent map_exps(const Laurent &f, const std::function<Vec(const Vec &)> &g) {
  Laurent r;
  for (const auto &[e, c] : f.terms()) r.add_term(g(e), c);
  return r;
}

Vec pos_part(const Vec &a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(a[i], 0);
  return r;
}

Vec neg_part(const Vec &a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(-a[i], 0);
  return r;
}

// q on (u, x_1..x_n) where u inverts x_1...x_n.
QMatrix with_inverse_of_product(const Field &F, const QMatrix &q) {
  std::size_t n = q.n();
  Vec ones(n, 1);
  std::vector<std::vector<Scalar>> m(n + 1, std::vector<Scalar>(n + 1, q.one()));
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    Scalar k = d_value(q, e, ones) * d_value(q, ones, e).inv();
    m[0][i + 1] = k;
    m[i + 1][0] = k.inv();
    for (std::size_t j = 0; j < n; ++j) m[i + 1][j + 1] = q(i, j);
  }
  return QMatrix::from_full(F, m);
}

// q on (t, x_1..x_n) with t central.
QMatrix with_central(const Field &F, const QMatrix &q) {
  std::size_t n = q.n();
  std::vector<std::vector<Scalar>> m(n + 1, std::vector<Scalar>(n + 1, q.one()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i + 1][j + 1] = q(i, j);
  return QMatrix::from_full(F, m);
}

Vec prepend(std::int64_t a, const Vec &e) {
  Vec r{a};
  r.insert(r.end(), e.begin(), e.end());
  return r;
}

// (I : x_1...x_n) from generators, via a new variable u with u x^1 = 1.
AffineIdeal saturate_gens(const Field &F, const QMatrix &q, const std::vector<Laurent> &gens) {
  std::size_t n = q.n();
  QMatrix qu = with_inverse_of_product(F, q);
  std::vector<Laurent> g;
  for (const auto &f : gens) g.push_back(map_exps(f, [](const Vec &e) { return prepend(0, e); }));
  g.push_back(Laurent::binomial(F.unit(), Vec(n + 1, 1), F.unit(), Vec(n + 1, 0)));
  AffineIdeal J(F, qu, g);
  std::vector<std::size_t> keep(n);
  std::iota(keep.begin(), keep.end(), 1);
  return eliminate(J, keep);
}

// Lattice points with every |a_i| <= bound, walking the HNF pivots.
void lattice_box(const Lattice &L, std::int64_t bound, std::size_t limit, const std::function<void(const Vec &)> &visit) {
  auto piv = L.pivots();
  std::size_t n = L.dim(), count = 0;
  std::function<void(std::size_t, Vec)> rec = [&](std::size_t l, Vec acc) {
    if (l == L.rank()) {
      for (auto x : acc)
        if (std::abs(x) > bound) return;
      if (++count > limit) throw MathError(Err::BoundExceeded, "certification sample exceeds " + std::to_string(limit) + " points");
      visit(acc);
      return;
    }
    std::int64_t p = L.row(l)[piv[l]], base = acc[piv[l]];
    // need |base + m p| <= bound
    std::int64_t lo = -((bound + base) / p) - 1, hi = (bound - base) / p + 1;
    for (std::int64_t m = lo; m <= hi; ++m) {
      std::int64_t v = base + m * p;
      if (std::abs(v) > bound) continue;
      rec(l + 1, vec_add(acc, vec_scale(L.row(l), m)));
    }
  };
  rec(0, Vec(n, 0));
}

} // namespace

AffineIdeal eliminate(const AffineIdeal &I, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::size_t n = I.n();
  for (auto k : keep)
    if (k >= n) throw MathError(Err::DimensionMismatch, "variable index out of range");
  auto drop = complement(keep, n);
  std::vector<std::size_t> prio = drop;
  prio.insert(prio.end(), keep.begin(), keep.end());
  auto sys = RewriteSystem::complete(I.field(), I.q(), I.generators(), prio);
  std::vector<Laurent> gens;
  for (const auto &r : sys.rules()) {
    bool inside = std::all_of(drop.begin(), drop.end(), [&](std::size_t j) { return r.lead[j] == 0; });
    if (!inside) continue;
    if (r.zero) gens.push_back(monomial_of(I.field(), restrict_vec(r.lead, keep)));
    else
      gens.push_back(Laurent::binomial(I.field().unit(), restrict_vec(r.lead, keep), FieldElem(r.nu),
                                       restrict_vec(r.tail, keep)));
  }
  return AffineIdeal(I.field(), I.q().restrict(keep), gens);
}

AffineIdeal project(const AffineIdeal &I, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  auto drop = complement(keep, I.n());
  std::vector<Laurent> gens;
  for (const auto &g : I.generators()) {
    Laurent h;
    for (const auto &[e, c] : g.terms()) {
      bool killed = std::any_of(drop.begin(), drop.end(), [&](std::size_t j) { return e[j] > 0; });
      if (!killed) h.add_term(restrict_vec(e, keep), c);
    }
    if (!h.is_zero()) gens.push_back(h);
  }
  return AffineIdeal(I.field(), I.q().restrict(keep), gens);
}

AffineIdeal lift(const AffineIdeal &I, const std::vector<std::size_t> &keep, const Field &F, const QMatrix &q,
                 bool with_killed) {
  std::size_t n = q.n();
  std::vector<Laurent> gens;
  for (const auto &g : I.generators()) gens.push_back(map_exps(g, [&](const Vec &e) { return embed_vec(e, keep, n); }));
  if (with_killed)
    for (auto j : complement(keep, n)) {
      Vec e(n, 0);
      e[j] = 1;
      gens.push_back(monomial_of(F, e));
    }
  return AffineIdeal(F, q, gens);
}

AffineIdeal contract_from_torus(const TorusContext &ctx, const TorusIdeal &T, bool certify) {
  const Field &F = ctx.field();
  const QMatrix &q = ctx.q();
  if (T.is_unit()) return AffineIdeal::unit(F, q);
  if (T.lattice().dim() != ctx.n()) throw MathError(Err::DimensionMismatch, "character lives in the wrong rank");
  if (T.lattice().rank() == 0) return AffineIdeal(F, q);
  auto seed = [&](const Vec &a) {
    Vec ap = pos_part(a), an = neg_part(a);
    Scalar s = d_value(q, a, an).inv() * binomial_value(ctx, T, a);
    return Laurent::binomial(F.unit(), ap, FieldElem(s), an);
  };
  std::vector<Laurent> gens;
  for (const auto &b : T.lattice().basis()) gens.push_back(seed(b));
  AffineIdeal out = saturate_gens(F, q, gens);
  if (certify) {
    std::int64_t mx = 0;
    for (const auto &b : T.lattice().basis())
      for (auto x : b) mx = std::max<std::int64_t>(mx, std::abs(x));
    lattice_box(T.lattice(), 2 * mx, 200000, [&](const Vec &a) {
      if (vec_is_zero(a)) return;
      if (!out.contains(seed(a)))
        throw MathError(Err::BoundExceeded, "contraction misses the lattice point " + vec_str(a));
    });
  }
  return out;
}

AffineIdeal saturate_by_product(const AffineIdeal &I) {
  if (I.n() == 0) return I;
  return saturate_gens(I.field(), I.q(), I.generators());
}

XClosure saturate_x(const AffineIdeal &I) {
  if (I.contains_monomial()) return {AffineIdeal::unit(I.field(), I.q()), std::nullopt};
  TorusContext ctx(I.field(), I.q());
  TorusIdeal T = from_generators(ctx, I.generators());
  AffineIdeal closure = contract_from_torus(ctx, T, false);
  if (!I.subset_of(closure)) throw MathError(Err::BoundExceeded, "x-closure does not contain the ideal");
  return {closure, T};
}

AffineIdeal intersect_special(const AffineIdeal &I, const AffineIdeal &I2, const std::vector<std::vector<Vec>> &monomial_ideals) {
  const Field &F = I.field();
  const QMatrix &q = I.q();
  std::size_t n = q.n();
  AffineIdeal B = I + I2;
  if (monomial_ideals.empty()) return B;
  QMatrix qt = with_central(F, q);
  std::vector<std::size_t> keep(n);
  std::iota(keep.begin(), keep.end(), 1);
  auto shift = [](std::int64_t t) { return [t](const Vec &e) { return prepend(t, e); }; };
  auto base = I.generators();
  for (const auto &J : monomial_ideals) {
    std::vector<Laurent> g;
    for (const auto &f : base) g.push_back(map_exps(f, shift(0)));
    for (const auto &f : B.generators()) g.push_back(map_exps(f, shift(1)));
    for (const auto &m : J) {
      if (m.size() != n) throw MathError(Err::DimensionMismatch, "monomial exponent length differs from n");
      g.push_back(Laurent::binomial(F.unit(), prepend(0, m), F.unit(), prepend(1, m)));
    }
    B = eliminate(AffineIdeal(F, qt, g), keep);
  }
  return B;
}

namespace {

struct RadicalCache {
  std::map<std::string, AffineIdeal> memo;
};

std::string cache_key(const AffineIdeal &I) {
  std::string k = std::to_string(I.n()) + "|";
  for (std::size_t i = 0; i < I.n(); ++i)
    for (std::size_t j = i + 1; j < I.n(); ++j) k += I.q()(i, j).str() + ",";
  return k + "|" + I.system().dump();
}

AffineIdeal radical_rec(AffineIdeal I, RadicalCache &cache) {
  if (I.is_unit() || I.n() == 0 || I.is_zero()) return I;
  std::string key = cache_key(I);
  if (auto it = cache.memo.find(key); it != cache.memo.end()) return it->second;
  const Field &F = I.field();
  const QMatrix q = I.q();
  std::size_t n = I.n();

  // Absorb the radicals of the eliminations, which leaves the radical alone.
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < n; ++i) {
      auto keep = all_but(n, i);
      AffineIdeal R = radical_rec(eliminate(I, keep), cache);
      AffineIdeal up = lift(R, keep, F, q, false);
      if (!up.subset_of(I)) {
        I = I + up;
        grew = true;
      }
    }
    if (I.is_unit()) return cache.memo.emplace(key, I).first->second;
  }

  AffineIdeal local = AffineIdeal::unit(F, q);
  if (!I.contains_monomial()) {
    TorusContext ctx(F, q);
    TorusIdeal T = from_generators(ctx, I.generators());
    local = contract_from_torus(ctx, radical(ctx, T), false);
  }

  std::vector<std::vector<Vec>> parts;
  for (std::size_t i = 0; i < n; ++i) {
    auto keep = all_but(n, i);
    AffineIdeal R = lift(radical_rec(project(I, keep), cache), keep, F, q, false);
    Vec ei(n, 0);
    ei[i] = 1;
    std::vector<Vec> J{ei};
    // squarefree monomials of R avoiding x_i, minimal under divisibility
    std::vector<Vec> found;
    for (std::size_t mask = 1; mask < (std::size_t(1) << keep.size()); ++mask) {
      Vec e(n, 0);
      for (std::size_t k = 0; k < keep.size(); ++k)
        if (mask >> k & 1) e[keep[k]] = 1;
      bool covered = std::any_of(found.begin(), found.end(), [&](const Vec &f) {
        for (std::size_t t = 0; t < n; ++t)
          if (f[t] > e[t]) return false;
        return true;
      });
      if (!covered && R.contains(monomial_of(F, e))) found.push_back(e);
    }
    J.insert(J.end(), found.begin(), found.end());
    parts.push_back(J);
  }
  AffineIdeal out = intersect_special(I, local, parts);
  return cache.memo.emplace(key, out).first->second;
}

} // namespace

AffineIdeal radical_affine(const AffineIdeal &I) {
  RadicalCache cache;
  return radical_rec(I, cache);
}

std::vector<AffinePrime> min_primes_affine(const AffineIdeal &I, unsigned threads) {
  const Field &F = I.field();
  const QMatrix &q = I.q();
  std::size_t n = q.n();
  if (n > 20) throw MathError(Err::BoundExceeded, "too many strata");
  std::size_t strata = std::size_t(1) << n;
  auto stratum = [&](std::size_t mask) {
    std::vector<AffinePrime> found;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) keep.push_back(i);
    AffineIdeal P = project(I, keep);
    if (P.contains_monomial()) return found;
    TorusContext ctx(F, q.restrict(keep));
    TorusIdeal T = from_generators(ctx, P.generators());
    if (T.is_unit()) return found;
    for (const auto &Q : min_assoc_primes(ctx, T)) {
      AffineIdeal up = lift(contract_from_torus(ctx, Q, false), keep, F, q, true);
      if (I.subset_of(up)) found.push_back(AffinePrime{up, keep, ctx, Q});
    }
    return found;
  };
  std::vector<std::vector<AffinePrime>> per(strata);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(strata)));
  if (threads == 1) {
    for (std::size_t mask = 0; mask < strata; ++mask) per[mask] = stratum(mask);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t mask = w; mask < strata; mask += threads) per[mask] = stratum(mask);
      }));
    for (auto &j : jobs) j.get();
  }
  std::vector<AffinePrime> cand;
  for (auto &v : per)
    for (auto &p : v) cand.push_back(std::move(p));
  std::vector<AffinePrime> out;
  for (std::size_t a = 0; a < cand.size(); ++a) {
    bool drop = false;
    for (std::size_t b = 0; b < cand.size() && !drop; ++b) {
      if (a == b || !cand[b].ideal.subset_of(cand[a].ideal)) continue;
      // strictly smaller, or an equal one listed earlier
      if (!cand[a].ideal.subset_of(cand[b].ideal) || b < a) drop = true;
    }
    if (!drop) out.push_back(cand[a]);
  }
  return out;
}

AffineClass classify_affine(const AffineIdeal &I) {
  const Field &F = I.field();
  std::size_t n = I.n();
  AffineClass res;
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0);
    e[j] = 1;
    if (!I.contains(monomial_of(F, e))) res.stratum.push_back(j);
  }
  AffineIdeal P = project(I, res.stratum);
  if (P.contains_monomial()) return res;
  TorusContext ctx(F, I.q().restrict(res.stratum));
  TorusIdeal T = from_generators(ctx, P.generators());
  if (T.is_unit()) return res;
  res.character = T;
  if (contract_from_torus(ctx, T, false) != P) return res;
  const Lattice &L = T.lattice();
  const Lattice &G = ctx.gamma_z();
  res.is_prime = saturate(L, G) == L;
  res.is_completely_prime = saturate(L, Lattice::full(res.stratum.size())) == L;
  res.is_primitive = res.is_prime && L == G;
  return res;
}

CongruenceClasses congruence_classes(const AffineIdeal &I, long degree_bound) {
  std::size_t n = I.n();
  std::map<Vec, std::vector<Vec>> by_nf;
  CongruenceClasses out;
  Vec cur(n, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i == n) {
      auto t = I.system().reduce(Monomial{I.q().one(), cur});
      if (t) by_nf[t->exp].push_back(cur);
      else out.zero_class.push_back(cur);
      return;
    }
    for (long k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  if (degree_bound >= 0) rec(0, degree_bound);
  for (auto &[k, v] : by_nf) {
    std::sort(v.begin(), v.end());
    out.classes.push_back(v);
  }
  std::sort(out.classes.begin(), out.classes.end());
  std::sort(out.zero_class.begin(), out.zero_class.end());
  return out;
}

} // namespace qtb
