#include "qtb/numtheory.hpp"

#include <algorithm>

#include "qtb/error.hpp"

namespace qtb {

namespace {

mpz_class rho(const mpz_class &n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto f = [&](const mpz_class &v) {
      mpz_class r = v * v + c;
      mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
      return r;
    };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      mpz_class diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_into(const mpz_class &n, std::map<mpz_class, unsigned> &out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    ++out[n];
    return;
  }
  mpz_class d = rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

} // namespace

std::map<mpz_class, unsigned> factor(const mpz_class &n0) {
  if (n0 == 0) throw MathError(Err::UnsupportedScalar, "factor of zero");
  mpz_class n = abs(n0);
  std::map<mpz_class, unsigned> out;
  for (unsigned long p = 2; p < 10000 && n > 1; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[mpz_class(p)];
      n /= p;
    }
  }
  factor_into(n, out);
  return out;
}

std::vector<long> divisors_of(long n) {
  std::vector<long> d;
  for (long i = 1; i * i <= n; ++i)
    if (n % i == 0) {
      d.push_back(i);
      if (i != n / i) d.push_back(n / i);
    }
  std::sort(d.begin(), d.end());
  return d;
}

long multiplicative_order_mod(const mpz_class &a, long n) {
  if (n == 1) return 1;
  mpz_class x = a % n;
  if (x < 0) x += n;
  mpz_class g;
  mpz_gcd_ui(g.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(n));
  if (g != 1) return 0;
  mpz_class y = x;
  for (long k = 1; k <= n; ++k) {
    if (y == 1) return k;
    y = (y * x) % n;
  }
  return 0;
}

} // namespace qtb
