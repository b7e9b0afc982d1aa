#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <set>

#include "gen.hpp"
#include "qtb/error.hpp"
#include "qtb/scalars.hpp"

using namespace qtb;

namespace {

// Numeric evaluation of a char 0 element at t_i = tvals[i-1], used as an
// independent check of the exact arithmetic.
using C = std::complex<double>;

C eval_term(const MonoKey &k, const Cyclo &c, const std::vector<double> &tvals) {
  C v = 0;
  const double tau = 2 * std::acos(-1.0);
  for (std::size_t j = 0; j < c.coeffs().size(); ++j)
    v += c.coeffs()[j].get_d() * std::polar(1.0, tau * double(j) / double(c.conductor()));
  for (const auto &[p, e] : k.rad) v *= std::pow(p.get_d(), e.get_d());
  for (const auto &[i, e] : k.t) v *= std::pow(tvals[i - 1], e.get_d());
  return v;
}

C eval(const FieldElem &x, const std::vector<double> &tvals) {
  C n = 0, d = 0;
  for (const auto &[k, c] : x.num()) n += eval_term(k, c, tvals);
  for (const auto &[k, c] : x.den()) d += eval_term(k, c, tvals);
  return n / d;
}

// Brute-force irreducibility over F_p: trial division by every monic
// polynomial of degree 1..m/2.
bool brute_irreducible(std::uint32_t p, const std::vector<std::uint64_t> &low) {
  std::vector<long> f(low.begin(), low.end());
  f.push_back(1);
  int m = static_cast<int>(low.size());
  for (int d = 1; d <= m / 2; ++d) {
    std::vector<long> g(d + 1, 0);
    g[d] = 1;
    for (;;) {
      std::vector<long> r = f;
      for (int k = m; k >= d; --k) {
        long t = ((r[k] % long(p)) + p) % p;
        for (int i = 0; i <= d; ++i) r[k - d + i] = ((r[k - d + i] - t * g[i]) % long(p) + p) % p;
      }
      bool zero = true;
      for (int i = 0; i < d; ++i) zero &= r[i] % long(p) == 0;
      if (zero) return false;
      int i = 0;
      while (i < d && ++g[i] == long(p)) g[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

} // namespace

TEST_CASE("cyclotomic relation and prime radicals normalize to zero") {
  Field F = Field::char0(0, 3);
  CHECK(F.parse("z^1/3 + z^2/3 + 1").is_zero());
  CHECK(F.parse("p2^1/2 * p2^1/2 - 2").is_zero());
  CHECK(F.parse("z^1/4 * z^1/4 + 1").is_zero());
  Field G = Field::charp(2);
  CHECK(G.parse("1 + 1").is_zero());
}

TEST_CASE("nth_roots char 0") {
  Field F = Field::char0();
  auto r = F.nth_roots(F.one(), 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].is_one());
  CHECK(r[1] == F.parse_scalar("-1"));

  auto s = F.nth_roots(F.parse_scalar("z^1/4"), 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == F.parse_scalar("z^1/8"));
  CHECK(s[1] == F.parse_scalar("z^5/8"));

  Field strict = F;
  strict.strict_roots = true;
  CHECK_THROWS_AS(strict.nth_roots(strict.parse_scalar("2"), 2), MathError);
  CHECK(strict.nth_roots(strict.parse_scalar("4"), 2).size() == 2);
}

TEST_CASE("nth_roots char p") {
  Field F = Field::charp(5);
  auto r = F.nth_roots(F.one(), 5);
  REQUIRE(r.size() == 1);
  CHECK(r[0].is_one());

  // x^2 = 2 has no root in GF(5); it does in GF(25).
  auto s = F.nth_roots(F.parse_scalar("2"), 2);
  REQUIRE(s.size() == 2);
  for (const auto &y : s) CHECK(y.pow(2) == F.parse_scalar("2"));
  CHECK(s[0].gf().reduced().degree() == 2);

  Field tight = F;
  tight.degree_bound = 1;
  CHECK_THROWS_AS(tight.nth_roots(tight.parse_scalar("2"), 2), MathError);
}

TEST_CASE("root_of_unity in GF(7) agrees with exhaustive search") {
  Field F = Field::charp(7);
  // Elements of exact order 3 in GF(7)^x, by exhaustion.
  std::set<long> order3;
  for (long a = 1; a < 7; ++a)
    if (a != 1 && (a * a * a) % 7 == 1) order3.insert(a);
  Scalar w = F.root_of_unity(3);
  CHECK(w.gf().reduced().degree() == 1);
  CHECK(order3.count(long(w.gf().reduced().coeffs()[0])) == 1);
  CHECK(w.pow(3).is_one());
  CHECK_FALSE(w.is_one());
  CHECK_THROWS_AS(F.root_of_unity(7), MathError);
}

TEST_CASE("root_of_unity has exact order") {
  for (Field F : {Field::char0(), Field::charp(2), Field::charp(3), Field::charp(5)}) {
    for (long n = 1; n <= 15; ++n) {
      if (F.backend == Backend::charp && n % long(F.p) == 0) continue;
      Scalar w = F.root_of_unity(n);
      CHECK(w.pow(n).is_one());
      for (long k = 1; k < n; ++k) CHECK_FALSE(w.pow(k).is_one());
    }
  }
}

TEST_CASE("GF moduli are the least irreducibles") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int m = 2; m <= (p == 5 ? 3 : 4); ++m) {
      const auto &f = gf_modulus(p, m);
      CHECK(brute_irreducible(p, f));
      // every smaller candidate (as a base-p number) is reducible
      std::vector<std::uint64_t> c(m, 0);
      for (;;) {
        if (c == f) break;
        CHECK_FALSE(brute_irreducible(p, c));
        int i = 0;
        while (i < m && ++c[i] == p) c[i++] = 0;
      }
    }
  }
}

TEST_CASE("GF embeddings are compatible ring homomorphisms") {
  gen::Rng rng(11);
  for (std::uint32_t p : {2u, 3u}) {
    for (auto [a, b, c] : {std::tuple{1, 2, 4}, std::tuple{2, 4, 8}, std::tuple{2, 6, 12}, std::tuple{3, 6, 12}, std::tuple{1, 3, 6}}) {
      for (int rep = 0; rep < 5; ++rep) {
        GFElem x = gen::gf(rng, p, a), y = gen::gf(rng, p, a);
        CHECK(x.lift(b).lift(c) == x.lift(c));
        CHECK((x * y).lift(c) == x.lift(c) * y.lift(c));
        CHECK((x + y).lift(c) == x.lift(c) + y.lift(c));
        CHECK(x.lift(c).reduced().degree() <= a);
      }
    }
    // degree 6 sees both GF(p^2) and GF(p^3); they must meet in GF(p).
    GFElem u = gen::gf(rng, p, 1);
    CHECK(u.lift(2).lift(6) == u.lift(3).lift(6));
  }
}

TEST_CASE("GF discrete log and primitive element") {
  gen::Rng rng(5);
  for (auto [p, m] : {std::pair{2u, 4}, std::pair{3u, 3}, std::pair{5u, 2}, std::pair{7u, 1}, std::pair{2u, 10}}) {
    GFElem g = gf_primitive(p, m);
    for (int rep = 0; rep < 10; ++rep) {
      GFElem x = gen::gf(rng, p, m);
      CHECK(g.pow(gf_log(x, m)) == x);
    }
  }
}

TEST_CASE("toric scalar group laws") {
  gen::Rng rng(1);
  Field F = Field::char0(2);
  for (int rep = 0; rep < 200; ++rep) {
    Scalar x(gen::toric(rng, 2, 12, true)), y(gen::toric(rng, 2, 12, true));
    CHECK(x * y == y * x);
    CHECK((x.inv() * x).is_one());
    long n = rng.range(1, 6);
    auto roots = F.nth_roots(x, n);
    CHECK(long(roots.size()) == n);
    std::set<Scalar> uniq(roots.begin(), roots.end());
    CHECK(uniq.size() == roots.size());
    for (const auto &r : roots) CHECK(r.pow(n) == x);
  }
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Field G = Field::charp(p);
    for (int rep = 0; rep < 40; ++rep) {
      Scalar x(gen::gf(rng, p, int(rng.range(1, 2))));
      long n = rng.range(1, 9);
      std::vector<Scalar> roots;
      try {
        roots = G.nth_roots(x, n);
      } catch (const MathError &e) {
        CHECK(e.kind() == Err::RootUnavailable);
        continue;
      }
      std::set<Scalar> uniq(roots.begin(), roots.end());
      CHECK(uniq.size() == roots.size());
      for (const auto &r : roots) CHECK(r.pow(n) == x);
    }
  }
}

TEST_CASE("field axioms on random triples") {
  gen::Rng rng(2);
  Field F = Field::char0(1, 12);
  auto rnd = [&](auto &r) {
    FieldElem e = F.zero();
    long k = r.range(1, 3);
    for (long i = 0; i < k; ++i) e = e + FieldElem(Scalar(gen::toric(r, 1, 12, true)));
    return e;
  };
  for (int rep = 0; rep < 60; ++rep) {
    FieldElem a = rnd(rng), b = rnd(rng), c = rnd(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + F.zero() == a);
    CHECK(a * F.unit() == a);
    CHECK((a - a).is_zero());
    if (!a.is_zero()) CHECK((a * a.inv()).is_one());
    // numeric cross-check at t1 = 1.7
    C lhs = eval(a * b + c, {1.7}), rhs = eval(a, {1.7}) * eval(b, {1.7}) + eval(c, {1.7});
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1 + std::abs(rhs)));
  }
  for (std::uint32_t p : {2u, 3u, 7u}) {
    for (int rep = 0; rep < 40; ++rep) {
      FieldElem a(gen::gf(rng, p, 2, false)), b(gen::gf(rng, p, 3, false)), c(gen::gf(rng, p, 1, false));
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK((a * a.inv()).is_one());
    }
  }
}

TEST_CASE("division by a sum") {
  Field F = Field::char0(1);
  FieldElem x = F.parse("(t1 + 1)/(t1 - 1)");
  FieldElem y = F.parse("(t1^2 + 2*t1 + 1)/(t1^2 - 1)");
  CHECK(x == y);
  CHECK(std::abs(eval(x, {3.0}) - C(2.0)) < 1e-12);
  CHECK(F.parse(x.str()) == x);
}

TEST_CASE("scalar literals round trip") {
  gen::Rng rng(3);
  Field F = Field::char0(2, 12);
  for (int rep = 0; rep < 200; ++rep) {
    Scalar x(gen::toric(rng, 2, 12, true));
    CHECK(F.parse_scalar(x.str()) == x);
  }
  CHECK(Scalar(Toric::from_rational(Rat(-3, 2)) * Toric::root_of_unity(Rat(1, 4)) * Toric::param(1, Rat(-2))).str() ==
        "3/2*z^3/4*t1^-2");
  CHECK(F.parse_scalar("-3/2*z^1/4*t1^-2").str() == "3/2*z^3/4*t1^-2");
  CHECK(F.parse_scalar("-3/2*p2^-1/2").str() == "-3/4*p2^1/2");
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Field G = Field::charp(p, 3);
    for (int rep = 0; rep < 50; ++rep) {
      GFElem e = gen::gf(rng, p, int(rng.range(1, 6)));
      CHECK(G.parse(e.str()).gf() == e);
    }
  }
  Field G = Field::charp(2, 4);
  CHECK(G.parse("g^4 + g + 1").is_zero() == (gf_modulus(2, 4) == std::vector<std::uint64_t>{1, 1, 0, 0}));
}

TEST_CASE("mixed backends are rejected") {
  Scalar a(Toric::from_rational(2));
  Scalar b(GFElem::from_int(3, 2));
  CHECK_THROWS_AS(a * b, MathError);
  CHECK_THROWS_AS(Field::charp(3).check(a), MathError);
  CHECK_THROWS_AS(FieldElem(a) + FieldElem(b), MathError);
}

TEST_CASE("parse diagnostics") {
  Field F = Field::char0(1);
  CHECK_THROWS_AS(F.parse("2 +"), ParseError);
  CHECK_THROWS_AS(F.parse("t2"), ParseError);
  CHECK_THROWS_AS(F.parse("p4^1/2"), ParseError);
  CHECK_THROWS_AS(F.parse_scalar("1 + t1"), MathError);
  CHECK_THROWS_AS(F.parse_scalar("0"), MathError);
}
