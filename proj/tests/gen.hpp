#pragma once

// Seeded random generators shared by the property tests.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "qtb/lattice.hpp"
#include "qtb/scalars.hpp"
#include "qtb/torus.hpp"

namespace gen {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  bool coin() { return range(0, 1) == 1; }
  template <class T> const T &pick(const std::vector<T> &v) { return v[range(0, static_cast<long>(v.size()) - 1)]; }
};

inline qtb::Vec vec(Rng &r, std::size_t n, long lo, long hi) {
  qtb::Vec v(n);
  for (auto &x : v) x = r.range(lo, hi);
  return v;
}

inline std::vector<qtb::Vec> rows(Rng &r, std::size_t k, std::size_t n, long bound) {
  std::vector<qtb::Vec> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(vec(r, n, -bound, bound));
  return out;
}

// Toric scalar with small prime/parameter/root-of-unity parts.
inline qtb::Toric toric(Rng &r, int params, long zeta_den = 12, bool fractional_primes = false) {
  qtb::Toric t = qtb::Toric::root_of_unity(qtb::Rat(r.range(0, zeta_den - 1), zeta_den));
  for (long p : {2L, 3L, 5L})
    if (r.range(0, 2) == 0) {
      qtb::Rat e(r.range(-2, 2), fractional_primes ? r.range(1, 2) : 1);
      e.canonicalize();
      t = t * qtb::Toric::prime_power(p, e);
    }
  for (int i = 1; i <= params; ++i)
    if (r.coin()) t = t * qtb::Toric::param(i, qtb::Rat(r.range(-2, 2)));
  return t;
}

inline qtb::GFElem gf(Rng &r, std::uint32_t p, int m, bool nonzero = true) {
  for (;;) {
    std::vector<std::uint64_t> c(m);
    for (auto &x : c) x = static_cast<std::uint64_t>(r.range(0, p - 1));
    auto e = qtb::GFElem::from_coeffs(p, m, c);
    if (!nonzero || !e.is_zero()) return e;
  }
}

// Random toric scalar of the given field: roots of unity of small order
// times small rationals/parameters in char 0, any nonzero element of GF(p)
// or GF(p^2) in char p.
inline qtb::Scalar scalar(Rng &r, const qtb::Field &F, bool roots_only = false) {
  if (F.backend == qtb::Backend::charp) return qtb::Scalar(gf(r, F.p, int(r.range(1, 2))));
  static const std::vector<long> dens{1, 2, 3, 4, 6};
  long N = r.pick(dens);
  qtb::Toric t = qtb::Toric::root_of_unity(qtb::Rat(r.range(0, N - 1), N));
  if (!roots_only) {
    if (r.range(0, 2) == 0) t = t * qtb::Toric::from_rational(qtb::Rat(r.range(1, 3), r.range(1, 3)));
    for (int i = 1; i <= F.params; ++i)
      if (r.coin()) t = t * qtb::Toric::param(i, qtb::Rat(r.range(-2, 2)));
  }
  return qtb::Scalar(t);
}

// q-matrix whose entries are roots of unity (and parameters when the
// field has them); `commuting` forces q = 1.
inline qtb::QMatrix qmatrix(Rng &r, const qtb::Field &F, std::size_t n, bool roots_only = false) {
  std::map<std::pair<std::size_t, std::size_t>, qtb::Scalar> up;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (r.range(0, 2) == 0) continue;
      if (F.backend == qtb::Backend::charp) {
        up[{i, j}] = qtb::Scalar(gf(r, F.p, 1));
      } else {
        static const std::vector<long> dens{2, 3, 4, 6};
        long N = r.pick(dens);
        qtb::Toric t = qtb::Toric::root_of_unity(qtb::Rat(r.range(0, N - 1), N));
        if (!roots_only && F.params > 0 && r.range(0, 3) == 0) t = t * qtb::Toric::param(1, qtb::Rat(r.range(-1, 1)));
        up[{i, j}] = qtb::Scalar(t);
      }
    }
  return qtb::QMatrix::from_upper(F, n, up);
}

// Random sublattice of `ambient` from k random combinations.
inline qtb::Lattice sublattice(Rng &r, const qtb::Lattice &ambient, std::size_t k, long bound) {
  std::vector<qtb::Vec> rows;
  for (std::size_t i = 0; i < k && ambient.rank() > 0; ++i) rows.push_back(ambient.combine(vec(r, ambient.rank(), -bound, bound)));
  return qtb::Lattice::from_rows(rows, ambient.dim());
}

inline std::vector<qtb::Scalar> values(Rng &r, const qtb::Field &F, std::size_t k, bool roots_only = false) {
  std::vector<qtb::Scalar> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(scalar(r, F, roots_only));
  return v;
}

} // namespace gen
