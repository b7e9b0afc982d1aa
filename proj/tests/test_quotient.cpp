#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "gen.hpp"
#include "cocycle.hpp"
#include "oracle.hpp"
#include "qtb/error.hpp"
#include "qtb/quotient.hpp"

using namespace qtb;

namespace {

// F[Z/n] written out directly.
FinDimAlgebra cyclic_group_algebra(const Field &F, std::size_t n) {
  FinDimAlgebra A{F, n, {}};
  A.mult.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A.mult[i * n + j] = {{(i + j) % n, F.unit()}};
  return A;
}

// 2x2 matrices (full, or upper triangular) on matrix units.
FinDimAlgebra matrix_units(const Field &F, bool upper) {
  std::vector<std::pair<int, int>> units{{0, 0}, {0, 1}, {1, 1}};
  if (!upper) units.push_back({1, 0});
  FinDimAlgebra A{F, units.size(), {}};
  A.mult.resize(A.dim * A.dim);
  for (std::size_t a = 0; a < A.dim; ++a)
    for (std::size_t b = 0; b < A.dim; ++b)
      if (units[a].second == units[b].first) {
        std::pair<int, int> prod{units[a].first, units[b].second};
        std::size_t k = std::find(units.begin(), units.end(), prod) - units.begin();
        A.mult[a * A.dim + b] = {{k, F.unit()}};
      }
  return A;
}

std::int64_t p_part(std::int64_t n, std::int64_t p) {
  std::int64_t r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

using gen::root;

} // namespace

TEST_CASE("oracle on hand-made algebras") {
  Field Q = Field::char0();
  auto r = findim_oracle(cyclic_group_algebra(Q, 2));
  CHECK(r.jacobson_radical_dim == 0);
  CHECK(r.is_semiprime);
  CHECK(r.center_dim == 2);
  CHECK(!r.is_prime);
  CHECK(findim_oracle(cyclic_group_algebra(Field::charp(2), 2)).jacobson_radical_dim == 1);

  for (auto F : {Q, Field::charp(2), Field::charp(3)}) {
    auto m = findim_oracle(matrix_units(F, false));
    CHECK(m.jacobson_radical_dim == 0);
    CHECK(m.center_dim == 1);
    CHECK(m.is_prime);
    auto u = findim_oracle(matrix_units(F, true));
    CHECK(u.jacobson_radical_dim == 1);
    CHECK(u.center_dim == 1);
    CHECK(!u.is_semiprime);
  }
  CHECK_THROWS_AS(findim_oracle(cyclic_group_algebra(Q, 8), 4), MathError);
}

TEST_CASE("modular group algebras of cyclic groups") {
  // F_p[Z/n] = F_p[x]/(x^m - 1)^{p^a} with n = p^a m, so the radical has n - m
  for (std::int64_t p : {2, 3, 5})
    for (std::size_t n = 1; n <= 12; ++n) {
      auto r = findim_oracle(cyclic_group_algebra(Field::charp(p), n));
      CHECK(r.jacobson_radical_dim == n - n / p_part(n, p));
      CHECK(r.center_dim == n);
    }
  // over GF(4): structure constants outside the prime field
  Field F4 = Field::charp(2, 2);
  FinDimAlgebra A{F4, 2, {}};
  FieldElem w = FieldElem(Scalar(GFElem::generator(2, 2)));
  A.mult = {{{0, F4.unit()}}, {{1, F4.unit()}}, {{1, F4.unit()}}, {{0, w * w}}};
  auto r = findim_oracle(A);
  CHECK(r.jacobson_radical_dim == 1); // e_1 - w e_0 squares to zero
}

TEST_CASE("twisted group algebra examples") {
  Field F = Field::char0();
  QMatrix q = QMatrix::trivial(F, 1);
  TorusContext ctx(F, q);
  auto I = TorusIdeal::make(ctx, Lattice::from_rows({{2}}, 1), {F.one()});
  TwistedGroupAlgebra T(ctx, I);
  CHECK(T.finite());
  CHECK(T.order() == 2);
  CHECK(T.torsion() == std::vector<std::int64_t>{2});
  CHECK(T.basis() == std::vector<Vec>{{0}, {1}});
  auto [c, g] = T.product({1}, {1});
  CHECK(c == F.one());
  CHECK(g == Vec{0});

  auto Z = TorusIdeal::make(ctx, Lattice(1), {});
  TwistedGroupAlgebra inf(ctx, Z);
  CHECK(!inf.finite());
  CHECK(inf.free_rank() == 1);
  CHECK_THROWS_AS(inf.basis(), MathError);
  CHECK(inf.product({2}, {-5}).second == Vec{-3});
  CHECK_THROWS_AS(TwistedGroupAlgebra(ctx, TorusIdeal::unit(1)), MathError);

  // quotient by the maximal ideal I(Gamma_Z, rho) has dimension |Gamma/Gamma_Z|
  QMatrix m = QMatrix::from_upper(F, 2, {{{0, 1}, F.parse_scalar("z^1/3")}});
  TorusContext cm(F, m);
  auto M = TorusIdeal::make(cm, cm.gamma_z(), {F.one(), F.one()});
  TwistedGroupAlgebra TM(cm, M);
  CHECK(TM.order() == 9);
  auto rep = findim_oracle(TM.algebra());
  CHECK(rep.is_prime);
  CHECK(rep.center_dim == 1);
}

TEST_CASE("twisted law against monomial products") {
  gen::Rng r(21);
  for (int trial = 0; trial < 30; ++trial) {
    Field F = trial % 2 ? Field::char0() : Field::charp(7);
    std::size_t n = r.range(1, 3);
    QMatrix q = gen::qmatrix(r, F, n, true);
    TorusContext ctx(F, q);
    Lattice L = gen::sublattice(r, ctx.gamma_z(), r.range(0, 3), 3);
    auto I = TorusIdeal::make(ctx, L, gen::values(r, F, L.rank(), true));
    TwistedGroupAlgebra T(ctx, I);
    for (int k = 0; k < 10; ++k) {
      Vec s = T.rep(gen::vec(r, n, -4, 4)), t = T.rep(gen::vec(r, n, -4, 4));
      auto [c, g] = T.product(s, t);
      auto st = monomial_mul(q, Monomial{q.one(), s}, Monomial{q.one(), t});
      Laurent lhs = Laurent::monomial(F.unit(), st.exp).scaled(FieldElem(st.coef));
      Laurent rhs = Laurent::monomial(F.unit(), g).scaled(FieldElem(c));
      CHECK(contains(ctx, I, lhs - rhs));
      CHECK(g == T.rep(vec_add(s, t)));
    }
  }
}


TEST_CASE("cocycle presentations") {
  Field F = Field::char0();
  Cocycle trivial = [&](const Vec &, const Vec &) { return F.one(); };
  auto z2 = from_group_cocycle(F, AbelianGroup{{2}}, trivial);
  CHECK(z2.q == QMatrix::trivial(F, 1));
  CHECK(z2.J.lattice() == Lattice::from_rows({{2}}, 1));
  CHECK(z2.J.rho() == std::vector<Scalar>{F.one()});
  auto z = from_group_cocycle(F, AbelianGroup{{0}}, trivial);
  CHECK(z.J.lattice().rank() == 0);

  Cocycle quat = [&](const Vec &g, const Vec &h) { return (g[0] * h[1]) % 2 ? F.parse_scalar("-1") : F.one(); };
  auto Qp = from_group_cocycle(F, AbelianGroup{{2, 2}}, quat);
  CHECK(Qp.q(0, 1) == F.parse_scalar("-1"));
  TorusContext ctx(F, Qp.q);
  CHECK(Qp.J.lattice() == ctx.gamma_z());
  TwistedGroupAlgebra T(ctx, Qp.J);
  auto A = T.algebra();
  CHECK(A.dim == 4);
  // y_{(1,0)} y_{(0,1)} = -y_{(1,1)} and y_{(0,1)} y_{(1,0)} = y_{(1,1)}
  auto [c1, g1] = T.product({1, 0}, {0, 1});
  auto [c2, g2] = T.product({0, 1}, {1, 0});
  CHECK(g1 == Vec{1, 1});
  CHECK(c1 == F.parse_scalar("-1") * c2);
  auto rep = findim_oracle(A);
  CHECK(rep.jacobson_radical_dim == 0);
  CHECK(rep.is_prime);

  Cocycle bad = [&](const Vec &g, const Vec &h) { return g[0] == 1 && h[0] == 1 ? F.parse_scalar("2") : F.one(); };
  CHECK_THROWS_AS(from_group_cocycle(F, AbelianGroup{{3}}, bad), MathError);
}

TEST_CASE("cocycle round trip") {
  gen::Rng r(22);
  for (int trial = 0; trial < 20; ++trial) {
    Field F = trial % 4 == 3 ? Field::charp(13) : Field::char0();
    auto e = gen::random_cocycle(r, F, 12);
    auto P = from_group_cocycle(F, e.G, [&](const Vec &g, const Vec &h) { return e(g, h); });
    TorusContext ctx(F, P.q);
    TwistedGroupAlgebra T(ctx, P.J);
    std::size_t n = e.G.rank();
    std::vector<Vec> reps;
    for (int k = 0; k < 12; ++k) reps.push_back(T.rep(gen::vec(r, n, -3, 3)));
    for (const auto &s : reps)
      for (const auto &t : reps) {
        auto [c, g] = T.product(s, t);
        CHECK(e.G.reduce(g) == e.G.reduce(vec_add(s, t)));
        Scalar want = gen::image_coef(e, s) * gen::image_coef(e, t) * e(e.G.reduce(s), e.G.reduce(t));
        CHECK(c * gen::image_coef(e, g) == want);
      }
  }
}

TEST_CASE("toric presentations") {
  Field F = Field::char0();
  auto B = toric_presentation(F, {{2}, {3}}, QMatrix::trivial(F, 2));
  CHECK(B == AffineIdeal(F, QMatrix::trivial(F, 2), {Laurent::binomial(F.unit(), {3, 0}, F.unit(), {0, 2})}));
  QMatrix m = QMatrix::from_upper(F, 2, {{{0, 1}, F.parse_scalar("z^1/5")}});
  CHECK(toric_presentation(F, {{1, 0}, {0, 1}}, m).is_zero());
  auto D = toric_presentation(F, {{1}, {1}}, QMatrix::trivial(F, 2));
  CHECK(D == AffineIdeal(F, QMatrix::trivial(F, 2), {Laurent::binomial(F.unit(), {1, 0}, F.unit(), {0, 1})}));
  CHECK_THROWS_AS(toric_presentation(F, {{1}, {1}}, m), MathError);

  // explicit target: y1 y2 = -y2 y1 on Z^2, monoid {e1, e2, e1+e2}
  QMatrix y = QMatrix::from_upper(F, 2, {{{0, 1}, F.parse_scalar("-1")}});
  std::vector<Vec> S{{1, 0}, {0, 1}, {1, 1}};
  std::map<std::pair<std::size_t, std::size_t>, Scalar> up;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) up[{i, j}] = d_value(y, S[i], S[j]) * d_value(y, S[j], S[i]).inv();
  QMatrix q3 = QMatrix::from_upper(F, 3, up);
  // y^(1,0) y^(0,1) = d((1,0),(0,1)) y^(1,1) = y^(1,1)
  auto T = toric_presentation(F, S, q3, &y);
  CHECK(T == AffineIdeal(F, q3, {Laurent::binomial(F.unit(), {1, 1, 0}, F.unit(), {0, 0, 1})}));
  CHECK_THROWS_AS(toric_presentation(F, S, QMatrix::trivial(F, 3), &y), MathError);
}

TEST_CASE("q-hat presentation") {
  Field F = Field::char0();
  auto one = qhat_presentation(F, QMatrix::trivial(F, 1));
  CHECK(one.qhat == QMatrix::trivial(F, 2));
  REQUIRE(one.generators.size() == 1);
  CHECK(one.generators[0] == Laurent::binomial(F.unit(), {1, 1}, F.unit(), {0, 0}));
  QMatrix m = QMatrix::from_upper(F, 2, {{{0, 1}, F.parse_scalar("-1")}});
  auto h = qhat_presentation(F, m);
  CHECK(h.qhat(0, 3) == m(1, 0));
  CHECK(h.qhat(0, 2) == F.one());
  gen::Rng r(23);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = r.range(1, 4);
    QMatrix q = gen::qmatrix(r, F, n);
    auto Q = qhat_presentation(F, q);
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) CHECK(Q.qhat(i, j) * Q.qhat(j, i) == F.one());
    // x_i and x_{i+n} are mutually inverse: x_{i+n} q-commutes with x_j like x_i^{-1}
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(Q.qhat(i + n, j) == q(i, j).inv());
  }
}

TEST_CASE("oracle concordance on full-rank torus quotients") {
  gen::Rng r(24);
  int seen = 0;
  for (int trial = 0; trial < 200 && seen < 25; ++trial) {
    bool charp = trial % 2;
    Field F = charp ? Field::charp(r.coin() ? 2 : 3) : Field::char0();
    std::size_t n = r.range(1, 3);
    QMatrix q = gen::qmatrix(r, F, n, true);
    TorusContext ctx(F, q);
    if (ctx.gamma_z().rank() != n) continue;
    Lattice L = gen::sublattice(r, ctx.gamma_z(), n + 1, 2);
    if (L.rank() != n || L.index() > 32) continue;
    auto I = TorusIdeal::make(ctx, L, gen::values(r, F, L.rank(), true));
    auto rep = findim_oracle(TwistedGroupAlgebra(ctx, I).algebra());
    auto R = radical(ctx, I);
    CHECK(R.lattice().index() == L.index() - Big(static_cast<long>(rep.jacobson_radical_dim)));
    if (!charp) {
      CHECK(rep.jacobson_radical_dim == 0);
      CHECK(classify(ctx, I).is_prime == rep.is_prime);
    }
    ++seen;
  }
  CHECK(seen >= 10);
}
