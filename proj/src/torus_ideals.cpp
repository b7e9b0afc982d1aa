#include "qtb/torus_ideals.hpp"

#include <sstream>

#include "qtb/error.hpp"

namespace qtb {

namespace {

Scalar eval_char(const Scalar &one, const std::vector<Scalar> &vals, const std::vector<Big> &m) {
  Scalar r = one;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != 0) r = r * vals[i].pow(m[i]);
  return r;
}

std::vector<Big> to_bigs(const Vec &v) {
  std::vector<Big> r;
  for (auto x : v) r.emplace_back(static_cast<long>(x));
  return r;
}

} // namespace

TorusIdeal TorusIdeal::unit(std::size_t n) {
  TorusIdeal I;
  I.unit_ = true;
  I.L_ = Lattice::full(n);
  return I;
}

TorusIdeal TorusIdeal::make(const TorusContext &ctx, const Lattice &L, const std::vector<Scalar> &rho) {
  if (L.dim() != ctx.n()) throw MathError(Err::DimensionMismatch, "lattice dimension differs from n");
  if (!L.subset_of(ctx.gamma_z())) throw MathError(Err::NotInCenter, L.str() + " is not inside the center lattice");
  if (rho.size() != L.rank())
    throw MathError(Err::DimensionMismatch, "expected " + std::to_string(L.rank()) + " character values, got " +
                                                std::to_string(rho.size()));
  for (const auto &v : rho) ctx.field().check(v);
  TorusIdeal I;
  I.L_ = L;
  I.rho_ = rho;
  return I;
}

Scalar TorusIdeal::rho_at(const Vec &a) const {
  auto m = L_.solve(a);
  if (!m) throw MathError(Err::NotSublattice, vec_str(a) + " is not in " + L_.str());
  Scalar one = rho_.empty() ? Scalar() : rho_[0] * rho_[0].inv();
  return eval_char(one, rho_, to_bigs(*m));
}

bool TorusIdeal::operator==(const TorusIdeal &o) const {
  if (unit_ || o.unit_) return unit_ == o.unit_;
  return L_ == o.L_ && rho_ == o.rho_;
}

std::string TorusIdeal::str() const {
  if (unit_) return "unit-ideal";
  std::ostringstream os;
  os << "torus(" << L_.str() << ", [";
  for (std::size_t i = 0; i < rho_.size(); ++i) os << (i ? ", " : "") << rho_[i].str();
  os << "])";
  return os.str();
}

Scalar binomial_value(const TorusContext &ctx, const TorusIdeal &I, const Vec &a) {
  Scalar r = ctx.c_value(a).inv();
  if (!vec_is_zero(a)) r = r * I.rho_at(a);
  return r;
}

TorusIdeal from_generators(const TorusContext &ctx, const std::vector<Laurent> &gens) {
  std::size_t n = ctx.n();
  std::vector<Vec> gammas;
  std::vector<Scalar> w;
  for (const auto &g : gens) {
    if (g.is_zero()) throw MathError(Err::ZeroBinomial, "zero generator");
    if (g.size() == 1) return TorusIdeal::unit(n);
    if (g.size() > 2) throw MathError(Err::UnsupportedScalar, "generator " + g.str() + " is not a binomial");
    auto hi = g.terms().rbegin();
    auto lo = g.terms().begin();
    const Vec &a = hi->first, &b = lo->first;
    if (a.size() != n) throw MathError(Err::DimensionMismatch, "generator exponent length");
    Vec gamma = vec_sub(a, b);
    // lambda x^a + mu x^b = lambda d^{-1} (x^gamma - nu) x^b
    FieldElem nu_f = -(hi->second.inv() * lo->second * FieldElem(ctx.d(gamma, b)));
    auto nu = nu_f.as_scalar();
    if (!nu) throw MathError(Err::UnsupportedScalar, "coefficient ratio " + nu_f.str() + " is not a toric scalar");
    if (!ctx.is_central(gamma)) return TorusIdeal::unit(n);
    gammas.push_back(gamma);
    // x^gamma - nu in I(L, rho) iff rho(gamma) = c(gamma) nu
    w.push_back(ctx.c_value(gamma) * *nu);
  }
  Scalar one = ctx.field().one();
  auto ht = hnf_transform(gammas, n);
  for (const auto &rel : ht.relations)
    if (!eval_char(one, w, rel).is_one()) return TorusIdeal::unit(n);
  std::vector<Scalar> rho;
  for (const auto &co : ht.hnf_coeffs) rho.push_back(eval_char(one, w, co));
  return TorusIdeal::make(ctx, Lattice::from_rows(ht.hnf, n), rho);
}

Laurent normal_form(const TorusContext &ctx, const TorusIdeal &I, const Laurent &f) {
  if (I.is_unit()) throw MathError(Err::WholeRingIdeal, "normal form modulo the whole ring");
  Laurent r;
  for (const auto &[g, lam] : f.terms()) {
    Vec s = I.lattice().coset_rep(g);
    Vec a = vec_sub(g, s);
    if (vec_is_zero(a)) {
      r.add_term(s, lam);
      continue;
    }
    Scalar k = ctx.d(s, a).inv() * binomial_value(ctx, I, a);
    r.add_term(s, lam * FieldElem(k));
  }
  return r;
}

bool contains(const TorusContext &ctx, const TorusIdeal &I, const Laurent &f) {
  if (I.is_unit()) return true;
  return normal_form(ctx, I, f).is_zero();
}

std::vector<std::vector<Scalar>> extend_character(const TorusContext &ctx, const Lattice &L_sub,
                                                  const std::vector<Scalar> &rho, const Lattice &L_sup) {
  const Field &F = ctx.field();
  AdaptedBasis ab = adapted_basis(L_sub, L_sup);
  if (ab.free_rank != 0) throw MathError(Err::NotSublattice, "extension needs a finite index");
  TorusIdeal sub = TorusIdeal::make(ctx, L_sub, rho);
  std::size_t r = ab.sup_basis.size();
  std::vector<std::vector<Scalar>> choices(r);
  for (std::size_t i = 0; i < r; ++i) {
    Vec target = vec_scale(ab.sup_basis[i], ab.factors[i]);
    Scalar v = vec_is_zero(target) ? F.one() : sub.rho_at(target);
    choices[i] = F.nth_roots(v, ab.factors[i]);
  }
  // coordinates of the HNF rows of L_sup in the adapted basis
  std::vector<Vec> coords;
  for (const auto &h : L_sup.basis()) {
    auto c = solve_in_basis(ab.sup_basis, h);
    if (!c) throw MathError(Err::NotSublattice, "adapted basis does not span the larger lattice");
    coords.push_back(*c);
  }
  std::vector<std::vector<Scalar>> out;
  std::vector<std::size_t> idx(r, 0);
  for (;;) {
    std::vector<Scalar> vals;
    for (std::size_t i = 0; i < r; ++i) vals.push_back(choices[i][idx[i]]);
    std::vector<Scalar> on_rows;
    for (const auto &c : coords) on_rows.push_back(eval_char(F.one(), vals, to_bigs(c)));
    out.push_back(std::move(on_rows));
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (r == 0) return out;
  }
}

TorusIdeal radical(const TorusContext &ctx, const TorusIdeal &I) {
  if (I.is_unit() || ctx.field().backend == Backend::char0) return I;
  Lattice Lp = saturate(I.lattice(), ctx.gamma_z(), SatMode::p_part, ctx.field().p);
  if (Lp == I.lattice()) return I;
  auto ext = extend_character(ctx, I.lattice(), I.rho(), Lp);
  return TorusIdeal::make(ctx, Lp, ext.at(0));
}

std::vector<TorusIdeal> min_assoc_primes(const TorusContext &ctx, const TorusIdeal &I) {
  if (I.is_unit()) return {};
  TorusIdeal R = radical(ctx, I);
  Lattice Ls = saturate(R.lattice(), ctx.gamma_z(), SatMode::full);
  std::vector<TorusIdeal> out;
  for (auto &vals : extend_character(ctx, R.lattice(), R.rho(), Ls)) out.push_back(TorusIdeal::make(ctx, Ls, vals));
  return out;
}

TorusClass classify(const TorusContext &ctx, const TorusIdeal &I) {
  if (I.is_unit()) throw MathError(Err::WholeRingIdeal, "classify needs a proper ideal");
  const Lattice &L = I.lattice();
  TorusClass c;
  c.height = L.rank();
  c.is_prime = saturate(L, ctx.gamma_z()) == L;
  c.is_completely_prime = saturate(L, Lattice::full(ctx.n())) == L;
  c.is_maximal = c.is_primitive = L == ctx.gamma_z();
  return c;
}

std::vector<Laurent> regular_generators(const TorusContext &ctx, const TorusIdeal &I) {
  if (I.is_unit()) return {Laurent::monomial(ctx.field().unit(), Vec(ctx.n(), 0))};
  std::vector<Laurent> out;
  for (const auto &b : I.lattice().basis())
    out.push_back(Laurent::binomial(ctx.field().unit(), b, FieldElem(binomial_value(ctx, I, b)), Vec(ctx.n(), 0)));
  return out;
}

} // namespace qtb
