#include <sstream>

#include "qtb/error.hpp"
#include "qtb/numtheory.hpp"
#include "qtb/scalars.hpp"

namespace qtb {

namespace {

Rat frac(const Rat &x) {
  Big f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rat(f);
}

Big floor_rat(const Rat &x) {
  Big f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

template <class K> void merge_add(std::map<K, Rat> &dst, const std::map<K, Rat> &src) {
  for (const auto &[k, v] : src) {
    Rat &r = dst[k];
    r += v;
    if (r == 0) dst.erase(k);
  }
}

template <class K> void scale(std::map<K, Rat> &m, const Rat &k) {
  if (k == 0) {
    m.clear();
    return;
  }
  for (auto &[key, v] : m) v *= k;
}

std::string exp_str(const Rat &e) {
  if (e.get_den() == 1) return e.get_num().get_str();
  return e.get_num().get_str() + "/" + e.get_den().get_str();
}

} // namespace

Toric Toric::from_rational(const Rat &r0) {
  if (r0 == 0) throw MathError(Err::ZeroCoefficient, "zero is not a toric scalar");
  Rat r = r0;
  r.canonicalize();
  Toric t;
  if (r < 0) t.zeta_ = Rat(1, 2);
  for (const auto &[p, e] : factor(r.get_num())) t.primes_[p] += Rat(static_cast<long>(e));
  for (const auto &[p, e] : factor(r.get_den())) t.primes_[p] -= Rat(static_cast<long>(e));
  return t;
}

Toric Toric::root_of_unity(const Rat &a) {
  Toric t;
  Rat x = a;
  x.canonicalize();
  t.zeta_ = frac(x);
  return t;
}

Toric Toric::param(int idx, const Rat &e) {
  Toric t;
  if (e != 0) t.params_[idx] = e;
  return t;
}

Toric Toric::prime_power(const Big &p, const Rat &e) {
  Toric t;
  if (e != 0) t.primes_[p] = e;
  return t;
}

Toric Toric::operator*(const Toric &o) const {
  Toric r = *this;
  r.zeta_ = frac(zeta_ + o.zeta_);
  merge_add(r.primes_, o.primes_);
  merge_add(r.params_, o.params_);
  return r;
}

Toric Toric::inv() const {
  Toric r = *this;
  r.zeta_ = frac(-zeta_);
  scale(r.primes_, Rat(-1));
  scale(r.params_, Rat(-1));
  return r;
}

Toric Toric::pow(const Big &k) const {
  Toric r = *this;
  Rat kk(k);
  r.zeta_ = frac(zeta_ * kk);
  scale(r.primes_, kk);
  scale(r.params_, kk);
  return r;
}

Toric Toric::root(long n) const {
  if (n <= 0) throw MathError(Err::RootUnavailable, "root index must be positive");
  Toric r = *this;
  Rat inv(1, n);
  inv.canonicalize();
  r.zeta_ = zeta_ * inv;
  scale(r.primes_, inv);
  scale(r.params_, inv);
  return r;
}

bool Toric::has_fractional_prime() const {
  for (const auto &[p, e] : primes_)
    if (e.get_den() != 1) return true;
  return false;
}

bool Toric::operator<(const Toric &o) const {
  if (zeta_ != o.zeta_) return zeta_ < o.zeta_;
  if (primes_ != o.primes_) return primes_ < o.primes_;
  return params_ < o.params_;
}

std::string Toric::str() const {
  bool neg = zeta_ == Rat(1, 2);
  Rat c = 1;
  std::vector<std::string> parts;
  if (!neg && zeta_ != 0) parts.push_back("z^" + exp_str(zeta_));
  for (const auto &[p, e] : primes_) {
    Big f = floor_rat(e);
    Rat fr = e - Rat(f);
    Big pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), Big(abs(f)).get_ui());
    if (f >= 0) c *= Rat(pw);
    else c /= Rat(pw);
    if (fr != 0) parts.push_back("p" + p.get_str() + "^" + exp_str(fr));
  }
  for (const auto &[i, e] : params_) parts.push_back("t" + std::to_string(i) + "^" + exp_str(e));
  std::ostringstream os;
  if (neg) os << '-';
  if (c != 1 || parts.empty()) {
    os << c.get_str();
    if (!parts.empty()) os << '*';
  }
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
  return os.str();
}

} // namespace qtb
