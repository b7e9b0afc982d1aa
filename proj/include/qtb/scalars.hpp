#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace qtb {

using Big = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// Q(zeta_N) in the power basis 1, z, ..., z^{phi(N)-1} modulo Phi_N.
// Binary operations work in the lcm conductor; str() uses the least one.

class Cyclo {
public:
  Cyclo() = default;
  Cyclo(const Rat &r);
  static Cyclo zeta(long N, long k);

  long conductor() const { return n_; }
  const std::vector<Rat> &coeffs() const { return c_; }
  bool is_zero() const;
  std::optional<Rat> as_rational() const;

  Cyclo lift(long M) const;
  Cyclo minimized() const;

  Cyclo operator+(const Cyclo &o) const;
  Cyclo operator-(const Cyclo &o) const;
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo &o) const;
  Cyclo inv() const;
  bool operator==(const Cyclo &o) const;
  bool operator!=(const Cyclo &o) const { return !(*this == o); }

  // r * zeta^{a/N} with a/N in [0,1), when the value has that shape.
  std::optional<std::pair<Rat, Rat>> as_root_times_rational() const;

  std::string str() const;

private:
  long n_ = 1;
  std::vector<Rat> c_{Rat(0)};
};

long euler_phi(long n);

// ---------------------------------------------------------------------------
// Char 0 toric scalar: zeta^{a} * prod p^{e_p} * prod t_i^{f_i}, exponents
// rational, a taken modulo 1. Never zero.

class Toric {
public:
  Toric() = default;
  static Toric from_rational(const Rat &r);
  static Toric root_of_unity(const Rat &a);
  static Toric param(int idx, const Rat &e);
  static Toric prime_power(const Big &p, const Rat &e);

  const Rat &zeta() const { return zeta_; }
  const std::map<Big, Rat> &primes() const { return primes_; }
  const std::map<int, Rat> &params() const { return params_; }

  Toric operator*(const Toric &o) const;
  Toric inv() const;
  Toric pow(const Big &k) const;
  Toric root(long n) const; // principal root: all exponents divided by n
  bool is_one() const { return zeta_ == 0 && primes_.empty() && params_.empty(); }
  bool has_fractional_prime() const;
  bool operator==(const Toric &o) const {
    return zeta_ == o.zeta_ && primes_ == o.primes_ && params_ == o.params_;
  }
  bool operator!=(const Toric &o) const { return !(*this == o); }
  bool operator<(const Toric &o) const;

  std::string str() const;

private:
  Rat zeta_{0};
  std::map<Big, Rat> primes_;
  std::map<int, Rat> params_;
};

// ---------------------------------------------------------------------------
// GF(p^m) with the least monic irreducible of each degree and a compatible
// system of embeddings between degrees m | m'. Elements may be zero.

class GFElem {
public:
  GFElem() = default;
  static GFElem from_int(std::uint32_t p, const Big &v);
  static GFElem generator(std::uint32_t p, int m);
  static GFElem from_coeffs(std::uint32_t p, int m, std::vector<std::uint64_t> c);

  std::uint32_t p() const { return p_; }
  int degree() const { return m_; }
  const std::vector<std::uint64_t> &coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;

  GFElem lift(int M) const;
  GFElem reduced() const; // rewritten over its least subfield

  GFElem operator+(const GFElem &o) const;
  GFElem operator-(const GFElem &o) const;
  GFElem operator-() const;
  GFElem operator*(const GFElem &o) const;
  GFElem inv() const;
  GFElem pow(const Big &e) const;
  bool operator==(const GFElem &o) const;
  bool operator!=(const GFElem &o) const { return !(*this == o); }
  bool operator<(const GFElem &o) const; // on reduced forms

  std::string str() const;

private:
  std::uint32_t p_ = 0;
  int m_ = 1;
  std::vector<std::uint64_t> c_;
};

// Least monic irreducible of degree m over F_p, coefficients c_0..c_{m-1}
// (the leading 1 omitted).
const std::vector<std::uint64_t> &gf_modulus(std::uint32_t p, int m);
// Canonical primitive element of GF(p^m): least element of full order.
GFElem gf_primitive(std::uint32_t p, int m);
// log of x with respect to gf_primitive(p, m); x nonzero in GF(p^m).
Big gf_log(const GFElem &x, int m);
// All roots in GF(p^m) of the monic polynomial with coefficients c (low to high).
std::vector<GFElem> gf_roots(const std::vector<GFElem> &monic, int m);

// ---------------------------------------------------------------------------

enum class Backend { char0, charp };

// Nonzero element of the toric subgroup of either backend.
class Scalar {
public:
  Scalar() : v_(Toric()) {}
  Scalar(const Toric &t) : v_(t) {}
  Scalar(const GFElem &g);

  Backend backend() const { return v_.index() == 0 ? Backend::char0 : Backend::charp; }
  const Toric &toric() const { return std::get<0>(v_); }
  const GFElem &gf() const { return std::get<1>(v_); }

  Scalar operator*(const Scalar &o) const;
  Scalar operator/(const Scalar &o) const { return *this * o.inv(); }
  Scalar inv() const;
  Scalar pow(const Big &k) const;
  Scalar pow(long k) const { return pow(Big(k)); }
  bool is_one() const;
  bool operator==(const Scalar &o) const;
  bool operator!=(const Scalar &o) const { return !(*this == o); }
  bool operator<(const Scalar &o) const;

  std::string str() const;

private:
  std::variant<Toric, GFElem> v_;
};

// ---------------------------------------------------------------------------
// General field element. Char 0: a quotient num/den of finite combinations of
// parameter/radical monomials with cyclotomic coefficients. Char p: GFElem.

struct MonoKey {
  std::map<int, Rat> t;      // parameter exponents, no zeros
  std::map<Big, Rat> rad;    // prime -> exponent in (0,1)
  bool operator<(const MonoKey &o) const;
  bool operator==(const MonoKey &o) const { return t == o.t && rad == o.rad; }
  bool is_one() const { return t.empty() && rad.empty(); }
};

using CPoly = std::map<MonoKey, Cyclo>;

class FieldElem {
public:
  FieldElem() = default; // char 0 zero
  static FieldElem zero(Backend b, std::uint32_t p = 0);
  static FieldElem one(Backend b, std::uint32_t p = 0);
  FieldElem(const Scalar &s);
  FieldElem(const GFElem &g);
  static FieldElem from_cyclo(const Cyclo &c);

  Backend backend() const { return gf_ ? Backend::charp : Backend::char0; }
  bool is_zero() const;
  bool is_one() const;

  FieldElem operator+(const FieldElem &o) const;
  FieldElem operator-(const FieldElem &o) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem &o) const;
  FieldElem operator/(const FieldElem &o) const { return *this * o.inv(); }
  FieldElem inv() const;
  FieldElem pow(long k) const;
  bool operator==(const FieldElem &o) const;
  bool operator!=(const FieldElem &o) const { return !(*this == o); }

  std::optional<Scalar> as_scalar() const;
  const GFElem &gf() const { return *gf_; }
  const CPoly &num() const { return num_; }
  const CPoly &den() const { return den_; }

  std::string str() const;

private:
  void normalize();
  std::optional<GFElem> gf_;
  CPoly num_;
  CPoly den_{{MonoKey{}, Cyclo(Rat(1))}};
};

// ---------------------------------------------------------------------------

struct Field {
  Backend backend = Backend::char0;
  std::uint32_t p = 0;      // characteristic (charp)
  int base_degree = 1;      // GF(p^m) that the literal `g` generates
  int params = 0;           // number of free parameters t_1..t_s (char 0)
  long conductor = 1;       // declared root tower N (char 0)
  int degree_bound = 24;    // largest extension degree nth_roots may use
  bool strict_roots = false;

  static Field char0(int params = 0, long conductor = 1);
  static Field charp(std::uint32_t p, int base_degree = 1);

  Scalar one() const;
  FieldElem zero() const;
  FieldElem unit() const;
  FieldElem from_int(long v) const;

  std::vector<Scalar> nth_roots(const Scalar &x, long n) const;
  Scalar root_of_unity(long n) const;

  FieldElem parse(const std::string &text) const;
  Scalar parse_scalar(const std::string &text) const;

  void check(const Scalar &s) const;
  void check(const FieldElem &e) const;
};

FieldElem normalize(const FieldElem &x);

} // namespace qtb
