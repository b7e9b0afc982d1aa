#pragma once

#include <map>
#include <vector>

#include <gmpxx.h>

namespace qtb {

// Prime factorization of |n| (n != 0) by trial division and Pollard rho.
std::map<mpz_class, unsigned> factor(const mpz_class &n);
std::vector<long> divisors_of(long n);
long multiplicative_order_mod(const mpz_class &a, long n); // least k with a^k = 1 mod n

} // namespace qtb
