#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "qtb/error.hpp"
#include "qtb/numtheory.hpp"
#include "qtb/scalars.hpp"

namespace qtb {

const char *err_name(Err e) {
  switch (e) {
  case Err::MixedBackend: return "MixedBackend";
  case Err::RootUnavailable: return "RootUnavailable";
  case Err::DimensionMismatch: return "DimensionMismatch";
  case Err::NotSublattice: return "NotSublattice";
  case Err::ZeroCoefficient: return "ZeroCoefficient";
  case Err::UnsupportedScalar: return "UnsupportedScalar";
  case Err::NotCentral: return "NotCentral";
  case Err::NotInCenter: return "NotInCenter";
  case Err::ZeroValue: return "ZeroValue";
  case Err::ZeroBinomial: return "ZeroBinomial";
  case Err::WholeRingIdeal: return "WholeRingIdeal";
  case Err::BoundExceeded: return "BoundExceeded";
  case Err::NotCocycle: return "NotCocycle";
  case Err::DimensionTooLarge: return "DimensionTooLarge";
  case Err::Incompatible: return "Incompatible";
  case Err::Overflow: return "Overflow";
  }
  return "MathError";
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(const GFElem &g) : v_(g) {
  if (g.is_zero()) throw MathError(Err::ZeroCoefficient, "zero is not a toric scalar");
}

namespace {

void same_backend(const Scalar &a, const Scalar &b) {
  if (a.backend() != b.backend()) throw MathError(Err::MixedBackend, "char 0 and char p scalars mixed");
  if (a.backend() == Backend::charp && a.gf().p() != b.gf().p())
    throw MathError(Err::MixedBackend, "scalars of different characteristic");
}

} // namespace

Scalar Scalar::operator*(const Scalar &o) const {
  same_backend(*this, o);
  if (backend() == Backend::char0) return Scalar(toric() * o.toric());
  return Scalar(gf() * o.gf());
}

Scalar Scalar::inv() const {
  if (backend() == Backend::char0) return Scalar(toric().inv());
  return Scalar(gf().inv());
}

Scalar Scalar::pow(const Big &k) const {
  if (backend() == Backend::char0) return Scalar(toric().pow(k));
  return Scalar(gf().pow(k));
}

bool Scalar::is_one() const { return backend() == Backend::char0 ? toric().is_one() : gf().is_one(); }

bool Scalar::operator==(const Scalar &o) const {
  if (backend() != o.backend()) return false;
  return backend() == Backend::char0 ? toric() == o.toric() : gf() == o.gf();
}

bool Scalar::operator<(const Scalar &o) const {
  if (backend() != o.backend()) return backend() < o.backend();
  return backend() == Backend::char0 ? toric() < o.toric() : gf() < o.gf();
}

std::string Scalar::str() const { return backend() == Backend::char0 ? toric().str() : gf().str(); }

// ---------------------------------------------------------------------------
// CPoly helpers

bool MonoKey::operator<(const MonoKey &o) const {
  if (t != o.t) return t < o.t;
  return rad < o.rad;
}

namespace {

Rat frac_part(const Rat &x, Big &fl) {
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rat(fl);
}

Cyclo zeta_of(const Rat &a) {
  // a in [0,1) with denominator N
  Big N = a.get_den();
  Big k = a.get_num();
  return Cyclo::zeta(N.get_si(), k.get_si());
}

// Split a toric scalar into cyclotomic coefficient and monomial key.
std::pair<MonoKey, Cyclo> toric_term(const Toric &t) {
  MonoKey key;
  Rat c = 1;
  for (const auto &[p, e] : t.primes()) {
    Big f;
    Rat fr = frac_part(e, f);
    Big pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), Big(abs(f)).get_ui());
    if (f >= 0) c *= Rat(pw);
    else c /= Rat(pw);
    if (fr != 0) key.rad[p] = fr;
  }
  key.t = t.params();
  Cyclo z = t.zeta() == 0 ? Cyclo(Rat(1)) : zeta_of(t.zeta());
  return {key, z * Cyclo(c)};
}

std::pair<MonoKey, Cyclo> key_mul(const MonoKey &a, const MonoKey &b) {
  MonoKey r = a;
  Rat c = 1;
  for (const auto &[i, e] : b.t) {
    Rat &x = r.t[i];
    x += e;
    if (x == 0) r.t.erase(i);
  }
  for (const auto &[p, e] : b.rad) {
    Rat &x = r.rad[p];
    x += e;
    if (x >= 1) {
      x -= 1;
      c *= Rat(p);
    }
    if (x == 0) r.rad.erase(p);
  }
  return {r, Cyclo(c)};
}

void add_term(CPoly &a, const MonoKey &k, const Cyclo &c) {
  auto it = a.find(k);
  if (it == a.end()) {
    if (!c.is_zero()) a.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) a.erase(it);
}

CPoly padd(CPoly a, const CPoly &b) {
  for (const auto &[k, c] : b) add_term(a, k, c);
  return a;
}

CPoly pneg(CPoly a) {
  for (auto &[k, c] : a) c = -c;
  return a;
}

CPoly pmul(const CPoly &a, const CPoly &b) {
  CPoly r;
  for (const auto &[ka, ca] : a)
    for (const auto &[kb, cb] : b) {
      auto [k, s] = key_mul(ka, kb);
      add_term(r, k, ca * cb * s);
    }
  return r;
}

// Inverse of a single term c * key.
std::pair<MonoKey, Cyclo> term_inv(const MonoKey &k, const Cyclo &c) {
  MonoKey r;
  Rat s = 1;
  for (const auto &[i, e] : k.t) r.t[i] = -e;
  for (const auto &[p, e] : k.rad) {
    r.rad[p] = 1 - e;
    s /= Rat(p);
  }
  return {r, c.inv() * Cyclo(s)};
}

bool peq(const CPoly &a, const CPoly &b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
  return true;
}

std::string key_str(const MonoKey &k) {
  Toric t;
  for (const auto &[p, e] : k.rad) t = t * Toric::prime_power(p, e);
  for (const auto &[i, e] : k.t) t = t * Toric::param(i, e);
  return t.str();
}

std::string term_str(const MonoKey &k, const Cyclo &c) {
  if (auto rr = c.as_root_times_rational()) {
    Toric t = Toric::from_rational(rr->first) * Toric::root_of_unity(rr->second);
    for (const auto &[p, e] : k.rad) t = t * Toric::prime_power(p, e);
    for (const auto &[i, e] : k.t) t = t * Toric::param(i, e);
    return t.str();
  }
  std::string s = "(" + c.str() + ")";
  if (!k.is_one()) s += "*" + key_str(k);
  return s;
}

std::string cpoly_str(const CPoly &a) {
  if (a.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto &[k, c] : a) {
    std::string t = term_str(k, c);
    if (!first && t[0] != '-') out += '+';
    out += t;
    first = false;
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// FieldElem

FieldElem FieldElem::zero(Backend b, std::uint32_t p) {
  FieldElem e;
  if (b == Backend::charp) e.gf_ = GFElem::from_int(p, 0);
  return e;
}

FieldElem FieldElem::one(Backend b, std::uint32_t p) {
  FieldElem e;
  if (b == Backend::charp) e.gf_ = GFElem::from_int(p, 1);
  else e.num_ = {{MonoKey{}, Cyclo(Rat(1))}};
  return e;
}

FieldElem::FieldElem(const Scalar &s) {
  if (s.backend() == Backend::charp) {
    gf_ = s.gf();
    return;
  }
  auto [k, c] = toric_term(s.toric());
  num_.emplace(k, c);
}

FieldElem::FieldElem(const GFElem &g) : gf_(g) {}

FieldElem FieldElem::from_cyclo(const Cyclo &c) {
  FieldElem e;
  if (!c.is_zero()) e.num_.emplace(MonoKey{}, c);
  return e;
}

void FieldElem::normalize() {
  if (gf_) return;
  if (num_.empty()) {
    den_ = {{MonoKey{}, Cyclo(Rat(1))}};
    return;
  }
  if (den_.size() == 1) {
    auto [k, c] = term_inv(den_.begin()->first, den_.begin()->second);
    num_ = pmul(num_, CPoly{{k, c}});
    den_ = {{MonoKey{}, Cyclo(Rat(1))}};
    return;
  }
  // Scale so that the first denominator term has coefficient 1.
  Cyclo lead = den_.begin()->second.inv();
  for (auto &[k, c] : den_) c = c * lead;
  for (auto &[k, c] : num_) c = c * lead;
}

namespace {

void check_pair(const FieldElem &a, const FieldElem &b) {
  if (a.backend() != b.backend()) throw MathError(Err::MixedBackend, "char 0 and char p field elements mixed");
  if (a.backend() == Backend::charp && a.gf().p() != b.gf().p())
    throw MathError(Err::MixedBackend, "field elements of different characteristic");
}

} // namespace

bool FieldElem::is_zero() const { return gf_ ? gf_->is_zero() : num_.empty(); }

bool FieldElem::is_one() const {
  if (gf_) return gf_->is_one();
  return peq(num_, den_);
}

FieldElem FieldElem::operator+(const FieldElem &o) const {
  check_pair(*this, o);
  FieldElem r;
  if (gf_) {
    r.gf_ = *gf_ + *o.gf_;
    return r;
  }
  if (peq(den_, o.den_)) {
    r.num_ = padd(num_, o.num_);
    r.den_ = den_;
  } else {
    r.num_ = padd(pmul(num_, o.den_), pmul(o.num_, den_));
    r.den_ = pmul(den_, o.den_);
  }
  r.normalize();
  return r;
}

FieldElem FieldElem::operator-() const {
  FieldElem r = *this;
  if (gf_) r.gf_ = -*gf_;
  else r.num_ = pneg(num_);
  return r;
}

FieldElem FieldElem::operator-(const FieldElem &o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem &o) const {
  check_pair(*this, o);
  FieldElem r;
  if (gf_) {
    r.gf_ = *gf_ * *o.gf_;
    return r;
  }
  r.num_ = pmul(num_, o.num_);
  r.den_ = pmul(den_, o.den_);
  r.normalize();
  return r;
}

FieldElem FieldElem::inv() const {
  if (is_zero()) throw MathError(Err::ZeroCoefficient, "division by zero");
  FieldElem r;
  if (gf_) {
    r.gf_ = gf_->inv();
    return r;
  }
  r.num_ = den_;
  r.den_ = num_;
  r.normalize();
  return r;
}

FieldElem FieldElem::pow(long k) const {
  if (k < 0) return inv().pow(-k);
  FieldElem r = one(backend(), gf_ ? gf_->p() : 0), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

bool FieldElem::operator==(const FieldElem &o) const {
  if (backend() != o.backend()) return false;
  if (gf_) return gf_->p() == o.gf_->p() && *gf_ == *o.gf_;
  if (peq(den_, o.den_)) return peq(num_, o.num_);
  return peq(pmul(num_, o.den_), pmul(o.num_, den_));
}

std::optional<Scalar> FieldElem::as_scalar() const {
  if (gf_) {
    if (gf_->is_zero()) return std::nullopt;
    return Scalar(*gf_);
  }
  if (num_.size() != 1 || den_.size() != 1) return std::nullopt;
  const auto &[k, c] = *num_.begin();
  auto rr = c.as_root_times_rational();
  if (!rr) return std::nullopt;
  Toric t = Toric::from_rational(rr->first) * Toric::root_of_unity(rr->second);
  for (const auto &[p, e] : k.rad) t = t * Toric::prime_power(p, e);
  for (const auto &[i, e] : k.t) t = t * Toric::param(i, e);
  return Scalar(t);
}

std::string FieldElem::str() const {
  if (gf_) return gf_->str();
  if (den_.size() == 1 && den_.begin()->first.is_one() && den_.begin()->second == Cyclo(Rat(1))) {
    return cpoly_str(num_);
  }
  return "(" + cpoly_str(num_) + ")/(" + cpoly_str(den_) + ")";
}

FieldElem normalize(const FieldElem &x) { return x * FieldElem::one(x.backend(), x.backend() == Backend::charp ? x.gf().p() : 0); }

// ---------------------------------------------------------------------------
// Field

Field Field::char0(int params, long conductor) {
  Field f;
  f.params = params;
  f.conductor = conductor;
  return f;
}

Field Field::charp(std::uint32_t p, int base_degree) {
  if (p < 2 || mpz_probab_prime_p(Big(p).get_mpz_t(), 30) == 0)
    throw MathError(Err::UnsupportedScalar, "characteristic " + std::to_string(p) + " is not prime");
  Field f;
  f.backend = Backend::charp;
  f.p = p;
  f.base_degree = base_degree;
  return f;
}

Scalar Field::one() const {
  if (backend == Backend::char0) return Scalar(Toric());
  return Scalar(GFElem::from_int(p, 1));
}

FieldElem Field::zero() const { return FieldElem::zero(backend, p); }
FieldElem Field::unit() const { return FieldElem::one(backend, p); }

FieldElem Field::from_int(long v) const {
  if (backend == Backend::charp) return FieldElem(GFElem::from_int(p, Big(v)));
  return FieldElem::from_cyclo(Cyclo(Rat(v)));
}

void Field::check(const Scalar &s) const {
  if (s.backend() != backend) throw MathError(Err::MixedBackend, "scalar " + s.str() + " from the other backend");
  if (backend == Backend::charp && s.gf().p() != p)
    throw MathError(Err::MixedBackend, "scalar of characteristic " + std::to_string(s.gf().p()));
}

void Field::check(const FieldElem &e) const {
  if (e.backend() != backend) throw MathError(Err::MixedBackend, "field element from the other backend");
  if (backend == Backend::charp && e.gf().p() != p)
    throw MathError(Err::MixedBackend, "field element of characteristic " + std::to_string(e.gf().p()));
}

Scalar Field::root_of_unity(long n) const {
  if (n <= 0) throw MathError(Err::RootUnavailable, "root of unity order must be positive");
  if (backend == Backend::char0) {
    Rat a(1, n);
    a.canonicalize();
    return Scalar(Toric::root_of_unity(n == 1 ? Rat(0) : a));
  }
  if (n % static_cast<long>(p) == 0)
    throw MathError(Err::RootUnavailable, "no primitive " + std::to_string(n) + "-th root of unity in characteristic " + std::to_string(p));
  long m = n == 1 ? 1 : multiplicative_order_mod(Big(p), n);
  if (m > degree_bound)
    throw MathError(Err::RootUnavailable, "mu_" + std::to_string(n) + " needs GF(" + std::to_string(p) + "^" + std::to_string(m) + ")");
  Big Q;
  mpz_ui_pow_ui(Q.get_mpz_t(), p, static_cast<unsigned long>(m));
  return Scalar(gf_primitive(p, m).pow((Q - 1) / n));
}

std::vector<Scalar> Field::nth_roots(const Scalar &x, long n) const {
  check(x);
  if (n <= 0) throw MathError(Err::RootUnavailable, "root index must be positive");
  std::vector<Scalar> out;
  if (backend == Backend::char0) {
    Toric y0 = x.toric().root(n);
    if (strict_roots && y0.has_fractional_prime())
      throw MathError(Err::RootUnavailable, "strict mode: " + std::to_string(n) + "-th root of " + x.str() + " is irrational");
    for (long k = 0; k < n; ++k) {
      Rat a(k, n);
      a.canonicalize();
      out.emplace_back(y0 * Toric::root_of_unity(a));
    }
    return out;
  }
  GFElem y = x.gf().reduced();
  long rest = n;
  while (rest % static_cast<long>(p) == 0) {
    // Frobenius inverse on GF(p^d) is x -> x^{p^{d-1}}.
    Big e;
    mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(y.degree() - 1));
    y = y.pow(e);
    rest /= static_cast<long>(p);
  }
  if (rest == 1) return {Scalar(y)};
  int d = y.degree();
  for (int m = d; m <= degree_bound; m += d) {
    Big Q;
    mpz_ui_pow_ui(Q.get_mpz_t(), p, static_cast<unsigned long>(m));
    if ((Q - 1) % rest != 0) continue;
    if (!y.lift(m).pow((Q - 1) / rest).is_one()) continue;
    std::vector<GFElem> poly(rest + 1, GFElem::from_int(p, 0).lift(m));
    poly[0] = -y.lift(m);
    poly[rest] = GFElem::from_int(p, 1).lift(m);
    for (const auto &r : gf_roots(poly, m)) out.emplace_back(r);
    std::sort(out.begin(), out.end());
    return out;
  }
  throw MathError(Err::RootUnavailable, std::to_string(n) + "-th roots of " + x.str() + " need an extension beyond degree " +
                                            std::to_string(degree_bound));
}

// ---------------------------------------------------------------------------
// Literal parser

namespace {

struct LitParser {
  const Field &F;
  const std::string &s;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("column " + std::to_string(i + 1) + ": " + msg + " in '" + s + "'", i + 1);
  }
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  Big integer() {
    ws();
    std::size_t st = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (st == i) fail("expected integer");
    return Big(s.substr(st, i - st));
  }
  Big signed_int() {
    bool neg = eat('-');
    Big v = integer();
    return neg ? Big(-v) : v;
  }
  Rat rational_exp() {
    Big a = signed_int();
    ws();
    if (i < s.size() && s[i] == '/' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      ++i;
      Big b = integer();
      if (b == 0) fail("zero denominator");
      Rat r(a, b);
      r.canonicalize();
      return r;
    }
    return Rat(a);
  }

  FieldElem expr() {
    FieldElem acc = term();
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }
  FieldElem term() {
    FieldElem acc = unary();
    for (;;) {
      if (eat('*')) acc = acc * unary();
      else if (eat('/')) {
        FieldElem d = unary();
        if (d.is_zero()) throw MathError(Err::ZeroCoefficient, "division by zero in '" + s + "'");
        acc = acc / d;
      } else return acc;
    }
  }
  FieldElem unary() {
    if (eat('-')) return -unary();
    return power();
  }
  FieldElem power() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    char c = s[i];
    if (c == '(') {
      ++i;
      FieldElem v = expr();
      if (!eat(')')) fail("expected ')'");
      if (eat('^')) return int_pow(v, signed_int());
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Big v = integer();
      FieldElem e = F.backend == Backend::charp ? FieldElem(GFElem::from_int(F.p, v)) : FieldElem::from_cyclo(Cyclo(Rat(v)));
      if (eat('^')) return int_pow(e, signed_int());
      return e;
    }
    if (c == 'z') {
      ++i;
      Rat a;
      if (eat('^')) a = rational_exp();
      else {
        a = Rat(1, F.conductor);
        a.canonicalize();
      }
      return root_power(a);
    }
    if (c == 't') {
      ++i;
      Big idx = integer();
      if (F.backend == Backend::charp) fail("parameters are not available in characteristic p");
      if (idx < 1 || idx > F.params) fail("parameter t" + idx.get_str() + " not declared");
      Rat e = eat('^') ? rational_exp() : Rat(1);
      return FieldElem(Scalar(Toric::param(static_cast<int>(idx.get_si()), e)));
    }
    if (c == 'p') {
      ++i;
      Big pr = integer();
      if (mpz_probab_prime_p(pr.get_mpz_t(), 30) == 0) fail("p" + pr.get_str() + " is not a prime");
      Rat e = eat('^') ? rational_exp() : Rat(1);
      if (F.backend == Backend::charp) {
        if (e.get_den() != 1) throw MathError(Err::UnsupportedScalar, "fractional prime power in characteristic p");
        return int_pow(FieldElem(GFElem::from_int(F.p, pr)), e.get_num());
      }
      return FieldElem(Scalar(Toric::prime_power(pr, e)));
    }
    if (c == 'g') {
      ++i;
      if (F.backend != Backend::charp) fail("generator g needs characteristic p");
      int m = F.base_degree;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        Big mm = integer();
        if (mm < 1 || mm > 4096) fail("bad extension degree");
        m = static_cast<int>(mm.get_si());
      }
      FieldElem e(GFElem::generator(F.p, m));
      if (eat('^')) return int_pow(e, signed_int());
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }
  FieldElem int_pow(const FieldElem &v, const Big &k) {
    if (!k.fits_slong_p()) fail("exponent too large");
    if (k < 0 && v.is_zero()) throw MathError(Err::ZeroCoefficient, "negative power of zero");
    return v.pow(k.get_si());
  }
  FieldElem root_power(Rat a) {
    if (F.backend == Backend::char0) return FieldElem(Scalar(Toric::root_of_unity(a)));
    Big den = a.get_den();
    if (!den.fits_slong_p()) fail("root of unity order too large");
    Scalar w = F.root_of_unity(den.get_si());
    Big num = a.get_num();
    return FieldElem(w.pow(num));
  }
};

} // namespace

FieldElem Field::parse(const std::string &text) const {
  LitParser ps{*this, text};
  FieldElem v = ps.expr();
  ps.ws();
  if (ps.i != text.size()) ps.fail("trailing input");
  return v;
}

Scalar Field::parse_scalar(const std::string &text) const {
  FieldElem v = parse(text);
  if (v.is_zero()) throw MathError(Err::ZeroCoefficient, "'" + text + "' is zero");
  auto s = v.as_scalar();
  if (!s) throw MathError(Err::UnsupportedScalar, "'" + text + "' is not a toric scalar");
  return *s;
}

} // namespace qtb
