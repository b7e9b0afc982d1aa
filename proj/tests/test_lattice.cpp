#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "gen.hpp"
#include "qtb/error.hpp"
#include "qtb/lattice.hpp"

using namespace qtb;

namespace {

// Rational Gaussian elimination: is a in the Q-span of rows, and with which
// coefficients. Used to decide integer membership independently of HNF.
std::optional<std::vector<Rat>> qsolve(const std::vector<Vec> &rows, const Vec &a) {
  std::size_t k = rows.size(), n = a.size();
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(k + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) m[j][i] = Rat(long(rows[i][j]));
    m[j][k] = Rat(long(a[j]));
  }
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t s = r;
    while (s < n && m[s][c] == 0) ++s;
    if (s == n) continue;
    std::swap(m[s], m[r]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (std::size_t j = c; j <= k; ++j) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (m[i][k] != 0) return std::nullopt;
  std::vector<Rat> x(k, 0);
  for (std::size_t i = 0; i < r; ++i) x[piv[i]] = m[i][k] / m[i][piv[i]];
  return x;
}

bool brute_member(const std::vector<Vec> &independent_rows, const Vec &a) {
  auto x = qsolve(independent_rows, a);
  if (!x) return false;
  for (const auto &v : *x)
    if (v.get_den() != 1) return false;
  return true;
}

Big det(std::vector<Vec> m) {
  std::size_t n = m.size();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(long(m[i][j]));
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t s = c;
    while (s < n && a[s][c] == 0) ++s;
    if (s == n) return 0;
    if (s != c) {
      std::swap(a[s], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Rat f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return abs(d.get_num());
}

void box(std::size_t n, long lo, long hi, const std::function<void(const Vec &)> &f) {
  Vec v(n, lo);
  for (;;) {
    f(v);
    std::size_t i = 0;
    while (i < n && ++v[i] > hi) v[i++] = lo;
    if (i == n) return;
  }
}

} // namespace

TEST_CASE("hnf examples") {
  Lattice L = Lattice::from_rows({{2, 0}, {0, 2}, {2, 2}}, 2);
  CHECK(L.basis() == std::vector<Vec>{{2, 0}, {0, 2}});
  CHECK(Lattice::from_rows({}, 3).rank() == 0);
  Lattice G = Lattice::from_rows({{1, -2, 1, 0}, {0, 1, -2, 1}}, 4);
  CHECK(G.rank() == 2);
  CHECK(G.basis() == std::vector<Vec>{{1, 0, -3, 2}, {0, 1, -2, 1}});
  CHECK(G.contains({1, -2, 1, 0}));
  CHECK_THROWS_AS(Lattice::from_rows({{1, 2}}, 3), MathError);
}

TEST_CASE("member_solve examples") {
  Lattice L = Lattice::from_rows({{2, 0}, {0, 2}}, 2);
  CHECK(L.solve({2, 4}) == Vec{1, 2});
  CHECK_FALSE(L.solve({1, 0}));
  CHECK(Lattice(2).solve({0, 0}) == Vec{});
  CHECK_THROWS_AS(L.solve({1}), MathError);
}

TEST_CASE("saturate examples") {
  Lattice A = Lattice::from_rows({{2, 0}, {0, 2}}, 2);
  CHECK(saturate(Lattice::from_rows({{4, 0}}, 2), A) == Lattice::from_rows({{2, 0}}, 2));
  Lattice Z = Lattice::full(1);
  CHECK(saturate(Lattice::from_rows({{5}}, 1), Z, SatMode::p_part, 5) == Z);
  CHECK(saturate(Lattice::from_rows({{6}}, 1), Z, SatMode::prime_to_p, 2) == Lattice::from_rows({{2}}, 1));
  CHECK(saturate(Lattice::from_rows({{6}}, 1), Z, SatMode::p_part, 2) == Lattice::from_rows({{3}}, 1));
  CHECK_THROWS_AS(saturate(Lattice::from_rows({{1, 0}}, 2), A), MathError);
}

TEST_CASE("adapted_basis examples") {
  Lattice Z = Lattice::full(1);
  auto r = adapted_basis(Lattice::from_rows({{2}}, 1), Z);
  CHECK(r.factors == std::vector<std::int64_t>{2});
  CHECK(r.torsion_order == 2);
  Lattice A = Lattice::from_rows({{2, 0}, {0, 2}}, 2);
  auto s = adapted_basis(Lattice::from_rows({{4, 0}, {0, 2}}, 2), A);
  CHECK(s.torsion_order == 2);
  CHECK(s.factors == std::vector<std::int64_t>{1, 2});
  auto t = adapted_basis(A, A);
  CHECK(t.torsion_order == 1);
  auto u = adapted_basis(Lattice::from_rows({{2, 0}}, 2), Lattice::full(2));
  CHECK(u.free_rank == 1);
  CHECK(u.torsion_order == 2);
}

TEST_CASE("coset_rep examples") {
  CHECK(Lattice::from_rows({{2}}, 1).coset_rep({5}) == Vec{1});
  CHECK(Lattice(2).coset_rep({3, -1}) == Vec{3, -1});
  CHECK(Lattice::full(2).coset_rep({7, 9}) == Vec{0, 0});
}

TEST_CASE("hnf is canonical and preserves the span") {
  gen::Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = rng.range(1, 4), k = rng.range(0, 4);
    auto rows = gen::rows(rng, k, n, 6);
    Lattice L = Lattice::from_rows(rows, n);
    CHECK(Lattice::from_rows(L.basis(), n) == L);
    for (const auto &r : rows) CHECK(L.contains(r));
    for (const auto &b : L.basis()) {
      // each basis row lies in the span of the generators (over Z)
      Lattice G = Lattice::from_rows(rows, n);
      CHECK(G.contains(b));
    }
    // shuffling and adding combinations leaves the HNF unchanged
    auto rows2 = rows;
    if (rows2.size() >= 2) rows2.push_back(vec_add(rows2[0], vec_scale(rows2[1], 3)));
    std::reverse(rows2.begin(), rows2.end());
    CHECK(Lattice::from_rows(rows2, n) == L);
  }
}

TEST_CASE("membership agrees with rational elimination") {
  gen::Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = rng.range(1, 3);
    Lattice L = Lattice::from_rows(gen::rows(rng, rng.range(0, 3), n, 4), n);
    for (int k = 0; k < 20; ++k) {
      Vec a = gen::vec(rng, n, -6, 6);
      auto s = L.solve(a);
      CHECK(bool(s) == brute_member(L.basis(), a));
      if (s) CHECK(L.combine(*s) == a);
    }
  }
}

TEST_CASE("index equals determinant and coset count") {
  gen::Rng rng(9);
  int checked = 0;
  while (checked < 40) {
    std::size_t n = rng.range(1, 3);
    auto rows = gen::rows(rng, n, n, 3);
    Big d = det(rows);
    if (d == 0 || d > 40) continue;
    ++checked;
    Lattice L = Lattice::from_rows(rows, n);
    CHECK(L.index() == d);
    auto ab = adapted_basis(L, Lattice::full(n));
    CHECK(ab.torsion_order == d);
    for (std::size_t i = 1; i < ab.factors.size(); ++i) CHECK(ab.factors[i] % ab.factors[i - 1] == 0);
    // d Z^n is inside L; count classes in the box [0,d)^n
    long D = d.get_si();
    std::set<Vec> reps;
    long in_L = 0;
    box(n, 0, D - 1, [&](const Vec &v) {
      reps.insert(L.coset_rep(v));
      in_L += brute_member(rows, v);
    });
    CHECK(long(reps.size()) == D);
    long total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= D;
    CHECK(total / in_L == D);
  }
}

TEST_CASE("coset_rep is a class function and idempotent") {
  gen::Rng rng(10);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = rng.range(1, 4);
    Lattice L = Lattice::from_rows(gen::rows(rng, rng.range(0, n), n, 5), n);
    Vec g = gen::vec(rng, n, -10, 10);
    Vec r = L.coset_rep(g);
    CHECK(L.coset_rep(r) == r);
    CHECK(L.contains(vec_sub(g, r)));
    Vec lam(n, 0);
    for (const auto &b : L.basis()) lam = vec_add(lam, vec_scale(b, rng.range(-3, 3)));
    CHECK(L.coset_rep(vec_add(g, lam)) == r);
  }
}

TEST_CASE("saturation agrees with brute force") {
  gen::Rng rng(12);
  for (int rep = 0; rep < 60; ++rep) {
    std::size_t n = rng.range(1, 3);
    Lattice A = Lattice::full(n);
    if (rng.coin()) A = Lattice::from_rows({vec_scale(Vec(n, 1), 1)}, n) + Lattice::from_rows(gen::rows(rng, n, n, 2), n);
    if (A.rank() == 0) continue;
    std::vector<Vec> sub;
    for (int k = 0; k < rng.range(1, 3); ++k) {
      Vec c = gen::vec(rng, A.rank(), -3, 3);
      sub.push_back(vec_scale(A.combine(c), rng.range(1, 4)));
    }
    Lattice L = Lattice::from_rows(sub, n);
    Lattice S = saturate(L, A);
    CHECK(saturate(S, A) == S);
    CHECK(L.subset_of(S));
    CHECK(S.subset_of(A));
    CHECK(S.rank() == L.rank());
    for (std::int64_t p : {2, 3}) {
      Lattice P = saturate(L, A, SatMode::p_part, p), Q = saturate(L, A, SatMode::prime_to_p, p);
      CHECK(L.subset_of(P));
      CHECK(P.subset_of(S));
      CHECK(Q.subset_of(S));
      // p-part index is a power of p, prime-to-p index is coprime to p
      auto ap = adapted_basis(L, P), aq = adapted_basis(L, Q);
      Big t = ap.torsion_order;
      while (t % p == 0) t /= p;
      CHECK(t == 1);
      CHECK(aq.torsion_order % p != 0);
      CHECK(P + Q == S);
    }
    box(n, -4, 4, [&](const Vec &v) {
      if (!A.contains(v)) return;
      // kv in L for some k iff v is in the rational span of L
      bool sat = L.rank() == 0 ? vec_is_zero(v) : bool(qsolve(L.basis(), v));
      CHECK(sat == S.contains(v));
    });
  }
}

TEST_CASE("integer kernel with congruences") {
  // 2a + 3b = 0 exactly; a = b mod 4
  std::vector<Congruence> eqs{{{2, 3}, 0}, {{1, -1}, 4}};
  Lattice K = integer_kernel(eqs, 2);
  box(2, -12, 12, [&](const Vec &v) {
    bool ok = 2 * v[0] + 3 * v[1] == 0 && ((v[0] - v[1]) % 4 + 4) % 4 == 0;
    CHECK(ok == K.contains(v));
  });
}

TEST_CASE("overflow is detected") {
  CHECK_THROWS_AS(to_i64(Big("100000000000000000000")), MathError);
}
