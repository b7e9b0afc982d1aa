#pragma once

// Random 2-cocycles on finitely generated abelian groups: a bicharacter
// times the coboundary of a hashed function, so the class is known.

#include <algorithm>
#include <numeric>

#include "gen.hpp"
#include "qtb/quotient.hpp"

namespace gen {

using namespace qtb;

inline qtb::Scalar root(const qtb::Field &F, long n, long k) { return F.root_of_unity(n).pow(k); }

struct RandomCocycle {
  AbelianGroup G;
  Field F;
  std::vector<std::vector<long>> b; // bicharacter exponents of root(N)
  long N;
  std::uint64_t salt;
  Scalar f(const Vec &g) const {
    std::uint64_t h = salt;
    for (auto x : g) h = h * 1000003u + static_cast<std::uint64_t>(x + 1000);
    h ^= h >> 29;
    h *= 0x9e3779b97f4a7c15ULL;
    return root(F, N, static_cast<long>((h >> 33) % static_cast<std::uint64_t>(N)));
  }
  Scalar operator()(const Vec &g, const Vec &h) const {
    long ex = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) ex += b[i][j] * g[i] * h[j];
    Scalar s = root(F, N, ((ex % N) + N) % N);
    return s * f(g) * f(h) * f(G.reduce(vec_add(g, h))).inv();
  }
};

inline RandomCocycle random_cocycle(gen::Rng &r, const Field &F, long N) {
  RandomCocycle c;
  c.F = F;
  c.N = N;
  c.salt = static_cast<std::uint64_t>(r.range(0, 1L << 30));
  long total = 1;
  std::size_t k = r.range(1, 3);
  for (std::size_t i = 0; i < k; ++i) {
    long o = r.range(0, 4) == 0 ? 0 : r.range(2, 4);
    if (o > 0 && total * o > 32) o = 0;
    if (o == 0 && std::count(c.G.orders.begin(), c.G.orders.end(), 0) >= 2) o = 2;
    if (o > 0) total *= o;
    c.G.orders.push_back(o);
  }
  c.b.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      // root(N)^{b} must be a root of unity of order dividing gcd(o_i, o_j)
      long oi = c.G.orders[i], oj = c.G.orders[j];
      long gd = std::gcd(oi, oj);
      if (gd == 0) gd = N;
      if (N % gd != 0) continue;
      c.b[i][j] = (N / gd) * r.range(0, gd - 1);
    }
  return c;
}

// mu(alpha) computed by multiplying basis elements one at a time.
inline Scalar image_coef(const RandomCocycle &e, const Vec &alpha) {
  std::size_t n = alpha.size();
  Vec zero(n, 0);
  Scalar e00 = e(zero, zero);
  Scalar coef = e00.inv();
  Vec g = zero;
  for (std::size_t i = 0; i < n; ++i)
    for (std::int64_t k = 0; k < std::abs(alpha[i]); ++k) {
      Vec gi(n, 0);
      gi[i] = alpha[i] > 0 ? 1 : -1;
      gi = e.G.reduce(gi);
      Scalar y = alpha[i] > 0 ? e00 * e00.inv() : (e(e.G.reduce(vec_neg(gi)), gi) * e00).inv();
      coef = coef * y * e(g, gi);
      g = e.G.reduce(vec_add(g, gi));
    }
  return coef;
}

} // namespace gen
