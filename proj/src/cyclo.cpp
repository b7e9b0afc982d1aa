#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "qtb/error.hpp"
#include "qtb/scalars.hpp"

namespace qtb {

namespace {

using QPoly = std::vector<Rat>; // low to high

void trim(QPoly &a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<long> divisors(long n) {
  std::vector<long> d;
  for (long i = 1; i * i <= n; ++i)
    if (n % i == 0) {
      d.push_back(i);
      if (i != n / i) d.push_back(n / i);
    }
  std::sort(d.begin(), d.end());
  return d;
}

// Exact division of a by the monic polynomial b.
QPoly pdiv(QPoly a, const QPoly &b) {
  trim(a);
  std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {};
  QPoly q(a.size() - db, Rat(0));
  for (std::size_t k = a.size(); k-- > db;) {
    Rat t = a[k];
    if (t == 0) continue;
    q[k - db] = t;
    for (std::size_t i = 0; i <= db; ++i) a[k - db + i] -= t * b[i];
  }
  return q;
}

const QPoly &cyclotomic(long n) {
  static std::recursive_mutex mu;
  static std::map<long, QPoly> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QPoly f(n + 1, Rat(0));
  f[0] = -1;
  f[n] = 1;
  for (long d : divisors(n)) {
    if (d == n) continue;
    f = pdiv(f, cyclotomic(d));
  }
  return cache.emplace(n, f).first->second;
}

QPoly reduce(QPoly a, long n) {
  const QPoly &f = cyclotomic(n);
  std::size_t df = f.size() - 1;
  for (std::size_t k = a.size(); k-- > df;) {
    Rat t = a[k];
    if (t == 0) continue;
    for (std::size_t i = 0; i <= df; ++i) a[k - df + i] -= t * f[i];
  }
  a.resize(df, Rat(0));
  return a;
}

QPoly pmul(const QPoly &a, const QPoly &b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// Solve sum_j x_j cols[j] = target over Q; none if inconsistent.
std::optional<std::vector<Rat>> qsolve(const std::vector<QPoly> &cols, const QPoly &target) {
  std::size_t rows = target.size(), nc = cols.size();
  std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(nc + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < nc; ++j) m[i][j] = cols[j][i];
    m[i][nc] = target[i];
  }
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rat inv = 1 / m[r][c];
    for (auto &x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t k = 0; k <= nc; ++k) m[i][k] -= f * m[r][k];
    }
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (m[i][nc] != 0) return std::nullopt;
  std::vector<Rat> x(nc, Rat(0));
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m[i][nc];
  return x;
}

std::string rat_str(const Rat &r) { return r.get_str(); }

} // namespace

long euler_phi(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

Cyclo::Cyclo(const Rat &r) : n_(1), c_{r} {}

Cyclo Cyclo::zeta(long N, long k) {
  if (N <= 0) throw MathError(Err::UnsupportedScalar, "conductor must be positive");
  k %= N;
  if (k < 0) k += N;
  QPoly a(k + 1, Rat(0));
  a[k] = 1;
  Cyclo z;
  z.n_ = N;
  z.c_ = reduce(a, N);
  return z;
}

bool Cyclo::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rat &x) { return x == 0; });
}

std::optional<Rat> Cyclo::as_rational() const {
  Cyclo m = minimized();
  if (m.n_ <= 2) return m.c_[0];
  return std::nullopt;
}

Cyclo Cyclo::lift(long M) const {
  if (M == n_) return *this;
  if (M % n_ != 0) throw MathError(Err::UnsupportedScalar, "bad conductor lift");
  long k = M / n_;
  QPoly a(static_cast<std::size_t>(k * (static_cast<long>(c_.size()) - 1) + 1), Rat(0));
  for (std::size_t j = 0; j < c_.size(); ++j) a[j * k] = c_[j];
  Cyclo r;
  r.n_ = M;
  r.c_ = reduce(a, M);
  return r;
}

Cyclo Cyclo::minimized() const {
  if (n_ <= 2) {
    Cyclo r;
    r.c_ = {c_[0]};
    return r;
  }
  QPoly target = c_;
  for (long M : divisors(n_)) {
    if (M == n_) break;
    if (M % 4 == 2) continue;
    long k = n_ / M;
    std::vector<QPoly> cols;
    long ph = euler_phi(M);
    for (long j = 0; j < ph; ++j) cols.push_back(zeta(n_, j * k).c_);
    if (auto x = qsolve(cols, target)) {
      Cyclo r;
      r.n_ = M;
      r.c_ = *x;
      if (M <= 2) {
        r.n_ = 1;
        r.c_ = {(*x)[0]};
      }
      return r;
    }
  }
  return *this;
}

Cyclo Cyclo::operator+(const Cyclo &o) const {
  long M = std::lcm(n_, o.n_);
  Cyclo a = lift(M), b = o.lift(M);
  for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
  return a;
}

Cyclo Cyclo::operator-() const {
  Cyclo a = *this;
  for (auto &x : a.c_) x = -x;
  return a;
}

Cyclo Cyclo::operator-(const Cyclo &o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo &o) const {
  long M = std::lcm(n_, o.n_);
  Cyclo a = lift(M), b = o.lift(M);
  Cyclo r;
  r.n_ = M;
  r.c_ = reduce(pmul(a.c_, b.c_), M);
  return r;
}

Cyclo Cyclo::inv() const {
  if (is_zero()) throw MathError(Err::ZeroCoefficient, "inverse of zero");
  // Solve (this * x) = 1 in the power basis.
  std::vector<QPoly> cols;
  long ph = static_cast<long>(c_.size());
  for (long j = 0; j < ph; ++j) cols.push_back((*this * zeta(n_, j)).lift(n_).c_);
  QPoly one(ph, Rat(0));
  one[0] = 1;
  auto x = qsolve(cols, one);
  Cyclo r;
  r.n_ = n_;
  r.c_ = *x;
  return r;
}

bool Cyclo::operator==(const Cyclo &o) const {
  long M = std::lcm(n_, o.n_);
  return lift(M).c_ == o.lift(M).c_;
}

std::optional<std::pair<Rat, Rat>> Cyclo::as_root_times_rational() const {
  if (is_zero()) return std::nullopt;
  Cyclo m = minimized();
  long N2 = 2 * m.n_;
  for (long j = 0; j < N2; ++j) {
    Cyclo t = m * zeta(N2, -j);
    bool rational = std::all_of(t.c_.begin() + 1, t.c_.end(), [](const Rat &x) { return x == 0; });
    if (rational && t.c_[0] > 0) {
      Rat a(j, N2);
      a.canonicalize();
      return std::make_pair(t.c_[0], a);
    }
  }
  return std::nullopt;
}

std::string Cyclo::str() const {
  Cyclo m = minimized();
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < m.c_.size(); ++j) {
    const Rat &c = m.c_[j];
    if (c == 0) continue;
    std::string term;
    if (j == 0) {
      term = rat_str(c);
    } else {
      Rat e(static_cast<long>(j), m.n_);
      e.canonicalize();
      std::string z = "z^" + e.get_num().get_str() + "/" + e.get_den().get_str();
      if (c == 1) term = z;
      else if (c == -1) term = "-" + z;
      else term = rat_str(c) + "*" + z;
    }
    if (!first && term[0] != '-') os << '+';
    os << term;
    first = false;
  }
  if (first) return "0";
  return os.str();
}

} // namespace qtb
