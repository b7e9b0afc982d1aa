#include <algorithm>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "qtb/error.hpp"
#include "qtb/numtheory.hpp"
#include "qtb/scalars.hpp"

namespace qtb {

namespace {

using E = std::vector<std::uint64_t>;

// Arithmetic in F_p[X]/(f), f = X^m + sum c_i X^i.
struct Fq {
  std::uint64_t p;
  int m;
  const E *f;

  E zero() const { return E(m, 0); }
  E one() const {
    E e(m, 0);
    e[0] = 1 % p;
    return e;
  }
  E scalar(std::uint64_t v) const {
    E e(m, 0);
    e[0] = v % p;
    return e;
  }
  bool is_zero(const E &a) const {
    return std::all_of(a.begin(), a.end(), [](std::uint64_t x) { return x == 0; });
  }
  E add(const E &a, const E &b) const {
    E r(m);
    for (int i = 0; i < m; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  E sub(const E &a, const E &b) const {
    E r(m);
    for (int i = 0; i < m; ++i) r[i] = (a[i] + p - b[i]) % p;
    return r;
  }
  E neg(const E &a) const {
    E r(m);
    for (int i = 0; i < m; ++i) r[i] = (p - a[i]) % p;
    return r;
  }
  E mul(const E &a, const E &b) const {
    if (m == 1) return E{(a[0] * b[0]) % p};
    std::vector<std::uint64_t> r(2 * m - 1, 0);
    for (int i = 0; i < m; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < m; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    for (int k = 2 * m - 2; k >= m; --k) {
      std::uint64_t t = r[k];
      if (!t) continue;
      for (int i = 0; i < m; ++i) r[k - m + i] = (r[k - m + i] + (p - (*f)[i]) % p * t) % p;
    }
    r.resize(m);
    return r;
  }
  E pow(E a, const Big &e) const {
    E r = one();
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      r = mul(r, r);
      if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
  }
  Big order() const {
    Big q;
    mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(m));
    return q;
  }
  E inv(const E &a) const {
    if (is_zero(a)) throw MathError(Err::ZeroCoefficient, "inverse of zero in GF(p^m)");
    return pow(a, order() - 2);
  }
  // Total order: base-p value with c_{m-1} most significant.
  static bool less(const E &a, const E &b) {
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

// Polynomials over Fq, coefficients low to high, trimmed.
using P = std::vector<E>;

struct PolyOps {
  const Fq &F;
  void trim(P &a) const {
    while (!a.empty() && F.is_zero(a.back())) a.pop_back();
  }
  P sub(P a, const P &b) const {
    if (a.size() < b.size()) a.resize(b.size(), F.zero());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    trim(a);
    return a;
  }
  P mul(const P &a, const P &b) const {
    if (a.empty() || b.empty()) return {};
    P r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (F.is_zero(a[i])) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
  }
  // Quotient and remainder by nonzero b.
  std::pair<P, P> divmod(P a, P b) const {
    trim(a);
    trim(b);
    if (a.size() < b.size()) return {{}, a};
    E linv = F.inv(b.back());
    P q(a.size() - b.size() + 1, F.zero());
    for (std::size_t k = a.size(); k-- >= b.size();) {
      E t = F.mul(a[k], linv);
      q[k - b.size() + 1] = t;
      if (!F.is_zero(t))
        for (std::size_t i = 0; i < b.size(); ++i)
          a[k - b.size() + 1 + i] = F.sub(a[k - b.size() + 1 + i], F.mul(t, b[i]));
      if (k == b.size() - 1) break;
    }
    trim(a);
    trim(q);
    return {q, a};
  }
  P mod(const P &a, const P &b) const { return divmod(a, b).second; }
  P monic(P a) const {
    trim(a);
    if (a.empty()) return a;
    E linv = F.inv(a.back());
    for (auto &c : a) c = F.mul(c, linv);
    return a;
  }
  P gcd(P a, P b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      P r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  P mulmod(const P &a, const P &b, const P &m) const { return mod(mul(a, b), m); }
  P powmod(P a, const Big &e, const P &m) const {
    P r{F.one()};
    r = mod(r, m);
    a = mod(a, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      r = mulmod(r, r, m);
      if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, a, m);
    }
    return r;
  }
  P x() const { return {F.zero(), F.one()}; }
};

// Roots in Fq of a monic polynomial h: distinct, sorted.
std::vector<E> fq_roots(const Fq &F, const P &h0) {
  PolyOps ops{F};
  P h = ops.monic(h0);
  if (h.size() <= 1) return {};
  // g = gcd(h, X^Q - X): the product of the distinct linear factors.
  P xq = ops.mod(ops.x(), h);
  for (int i = 0; i < F.m; ++i) xq = ops.powmod(xq, Big(static_cast<unsigned long>(F.p)), h);
  P g = ops.gcd(h, ops.sub(xq, ops.x()));
  std::vector<E> roots;
  std::vector<P> stack{g};
  std::mt19937_64 rng(0x51ed2701u);
  Big Q = F.order();
  while (!stack.empty()) {
    P a = stack.back();
    stack.pop_back();
    if (a.size() <= 1) continue;
    if (a.size() == 2) {
      roots.push_back(F.neg(a[0]));
      continue;
    }
    for (;;) {
      E delta(F.m);
      for (auto &c : delta) c = rng() % F.p;
      P probe;
      if (F.p == 2) {
        P t = ops.mod(P{F.zero(), delta}, a), acc = t;
        for (int i = 1; i < F.m; ++i) {
          t = ops.mulmod(t, t, a);
          acc = ops.sub(acc, ops.sub(P{}, t));
        }
        probe = acc;
      } else {
        P base{delta, F.one()};
        probe = ops.sub(ops.powmod(base, (Q - 1) / 2, a), P{F.one()});
      }
      P d = ops.gcd(a, probe);
      if (d.size() > 1 && d.size() < a.size()) {
        stack.push_back(d);
        stack.push_back(ops.divmod(a, d).first);
        break;
      }
    }
  }
  std::sort(roots.begin(), roots.end(), Fq::less);
  return roots;
}

bool irreducible(std::uint64_t p, const E &coeffs) {
  int m = static_cast<int>(coeffs.size());
  E one_mod{0};
  Fq Fp{p, 1, &one_mod};
  PolyOps ops{Fp};
  P f;
  for (auto c : coeffs) f.push_back(E{c});
  f.push_back(E{1});
  P xp = ops.x();
  for (int i = 1; i <= m / 2; ++i) {
    xp = ops.powmod(xp, Big(static_cast<unsigned long>(p)), f);
    if (ops.gcd(f, ops.sub(xp, ops.x())).size() != 1) return false;
  }
  return true;
}

struct Tables {
  std::map<int, E> modulus;
  std::map<std::pair<int, int>, E> emb; // image of the generator of GF(p^a) in GF(p^b)
  std::map<int, E> primitive;
};

std::recursive_mutex g_mu;
std::map<std::uint32_t, Tables> g_tables;

Tables &tables(std::uint32_t p) { return g_tables[p]; }

const E &modulus(std::uint32_t p, int m) {
  std::lock_guard<std::recursive_mutex> lock(g_mu);
  Tables &t = tables(p);
  auto it = t.modulus.find(m);
  if (it != t.modulus.end()) return it->second;
  E c(m, 0);
  if (m > 1) {
    for (;;) {
      if (c[0] != 0 && irreducible(p, c)) break;
      int i = 0;
      while (i < m && ++c[i] == p) c[i++] = 0;
      if (i == m) throw MathError(Err::RootUnavailable, "no irreducible polynomial found");
    }
  }
  return t.modulus.emplace(m, c).first->second;
}

Fq field(std::uint32_t p, int m) { return Fq{p, m, &modulus(p, m)}; }

// Evaluate x (an element of GF(p^a) with a = x.size()) at the image r of
// the generator inside GF(p^b).
E apply_image(const Fq &Fb, const E &r, const E &x) {
  E acc = Fb.zero();
  for (std::size_t i = x.size(); i-- > 0;) acc = Fb.add(Fb.mul(acc, r), Fb.scalar(x[i]));
  return acc;
}

E embed_generator(std::uint32_t p, int a, int b);

E embed(std::uint32_t p, const E &x, int a, int b) {
  if (a == b) return x;
  Fq Fb = field(p, b);
  if (a == 1) return Fb.scalar(x[0]);
  return apply_image(Fb, embed_generator(p, a, b), x);
}

E embed_generator(std::uint32_t p, int a, int b) {
  std::lock_guard<std::recursive_mutex> lock(g_mu);
  Tables &t = tables(p);
  auto key = std::make_pair(a, b);
  auto it = t.emb.find(key);
  if (it != t.emb.end()) return it->second;
  Fq Fb = field(p, b);
  // Fix the embeddings of all maximal subfields of GF(p^b) first, each
  // compatible with those already chosen on their common subfield.
  std::vector<int> maximal;
  {
    int n = b;
    for (int q = 2; q <= n; ++q)
      if (n % q == 0) {
        maximal.push_back(b / q);
        while (n % q == 0) n /= q;
      }
  }
  std::vector<int> chosen;
  for (int c : maximal) {
    if (c == 1) continue;
    auto kc = std::make_pair(c, b);
    if (!t.emb.count(kc)) {
      const E &fc = modulus(p, c);
      P poly;
      for (auto v : fc) poly.push_back(Fb.scalar(v));
      poly.push_back(Fb.one());
      bool found = false;
      for (const E &r : fq_roots(Fb, poly)) {
        bool ok = true;
        for (int c2 : chosen) {
          int g = std::gcd(c, c2);
          if (g == 1) continue;
          E via1 = apply_image(Fb, r, embed_generator(p, g, c));
          E via2 = apply_image(Fb, t.emb.at({c2, b}), embed_generator(p, g, c2));
          if (via1 != via2) {
            ok = false;
            break;
          }
        }
        if (ok) {
          t.emb[kc] = r;
          found = true;
          break;
        }
      }
      if (!found) throw MathError(Err::RootUnavailable, "no compatible embedding");
    }
    chosen.push_back(c);
  }
  if (a == b) {
    E g = Fb.zero();
    if (b > 1) g[1] = 1;
    return t.emb[key] = g;
  }
  for (int c : maximal) {
    if (c % a != 0) continue;
    E img = c == a ? t.emb.at({c, b}) : apply_image(Fb, t.emb.at({c, b}), embed_generator(p, a, c));
    return t.emb[key] = img;
  }
  throw MathError(Err::RootUnavailable, "degree " + std::to_string(a) + " does not divide " + std::to_string(b));
}

void check_same_p(const GFElem &a, const GFElem &b) {
  if (a.p() != b.p())
    throw MathError(Err::MixedBackend, "GF(" + std::to_string(a.p()) + ") and GF(" + std::to_string(b.p()) + ")");
}

} // namespace

const std::vector<std::uint64_t> &gf_modulus(std::uint32_t p, int m) { return modulus(p, m); }

GFElem GFElem::from_coeffs(std::uint32_t p, int m, std::vector<std::uint64_t> c) {
  if (p < 2) throw MathError(Err::UnsupportedScalar, "characteristic must be prime");
  GFElem e;
  e.p_ = p;
  e.m_ = m;
  c.resize(m, 0);
  for (auto &x : c) x %= p;
  e.c_ = std::move(c);
  return e;
}

GFElem GFElem::from_int(std::uint32_t p, const Big &v) {
  Big r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return from_coeffs(p, 1, {r.get_ui()});
}

GFElem GFElem::generator(std::uint32_t p, int m) {
  std::vector<std::uint64_t> c(m, 0);
  if (m == 1) return gf_primitive(p, 1);
  c[1] = 1;
  return from_coeffs(p, m, c);
}

bool GFElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint64_t x) { return x == 0; });
}

bool GFElem::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](std::uint64_t x) { return x == 0; });
}

GFElem GFElem::lift(int M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) throw MathError(Err::MixedBackend, "cannot lift GF degree " + std::to_string(m_) + " to " + std::to_string(M));
  GFElem r;
  r.p_ = p_;
  r.m_ = M;
  r.c_ = embed(p_, c_, m_, M);
  return r;
}

GFElem GFElem::reduced() const {
  if (m_ == 1) return *this;
  Fq F = field(p_, m_);
  for (long d : divisors_of(m_)) {
    if (d == m_) break;
    Big pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), p_, static_cast<unsigned long>(d));
    if (F.pow(c_, pd) != c_) continue;
    // Solve y in GF(p^d) with lift(y) == *this, over F_p.
    std::vector<E> cols;
    E gimg = d == 1 ? F.one() : embed_generator(p_, static_cast<int>(d), m_);
    E pw = F.one();
    for (long i = 0; i < d; ++i) {
      cols.push_back(pw);
      pw = F.mul(pw, gimg);
    }
    std::size_t rows = m_, nc = d;
    std::vector<std::vector<std::uint64_t>> mat(rows, std::vector<std::uint64_t>(nc + 1));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < nc; ++j) mat[i][j] = cols[j][i];
      mat[i][nc] = c_[i];
    }
    Fq Fp{p_, 1, &modulus(p_, 1)};
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < rows; ++c) {
      std::size_t k = r;
      while (k < rows && mat[k][c] == 0) ++k;
      if (k == rows) continue;
      std::swap(mat[k], mat[r]);
      std::uint64_t inv = Fp.inv(E{mat[r][c]})[0];
      for (auto &x : mat[r]) x = x * inv % p_;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || mat[i][c] == 0) continue;
        std::uint64_t f = mat[i][c];
        for (std::size_t j = 0; j <= nc; ++j) mat[i][j] = (mat[i][j] + (p_ - f) * mat[r][j]) % p_;
      }
      piv.push_back(c);
      ++r;
    }
    std::vector<std::uint64_t> y(nc, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) y[piv[i]] = mat[i][nc];
    return from_coeffs(p_, static_cast<int>(d), y);
  }
  return *this;
}

#define QTB_GF_BINOP(op, fn)                                                                                         \
  GFElem GFElem::operator op(const GFElem &o) const {                                                                \
    check_same_p(*this, o);                                                                                          \
    int M = std::lcm(m_, o.m_);                                                                                      \
    GFElem a = lift(M), b = o.lift(M);                                                                               \
    Fq F = field(p_, M);                                                                                             \
    a.c_ = F.fn(a.c_, b.c_);                                                                                         \
    return a;                                                                                                        \
  }
QTB_GF_BINOP(+, add)
QTB_GF_BINOP(-, sub)
QTB_GF_BINOP(*, mul)
#undef QTB_GF_BINOP

GFElem GFElem::operator-() const {
  GFElem a = *this;
  a.c_ = field(p_, m_).neg(c_);
  return a;
}

GFElem GFElem::inv() const {
  GFElem a = *this;
  a.c_ = field(p_, m_).inv(c_);
  return a;
}

GFElem GFElem::pow(const Big &e) const {
  GFElem a = *this;
  Fq F = field(p_, m_);
  if (e < 0) {
    a.c_ = F.pow(F.inv(c_), -e);
  } else {
    a.c_ = F.pow(c_, e);
  }
  return a;
}

bool GFElem::operator==(const GFElem &o) const {
  if (p_ != o.p_) return false;
  int M = std::lcm(m_, o.m_);
  return lift(M).c_ == o.lift(M).c_;
}

bool GFElem::operator<(const GFElem &o) const {
  GFElem a = reduced(), b = o.reduced();
  if (a.m_ != b.m_) return a.m_ < b.m_;
  return Fq::less(a.c_, b.c_);
}

std::string GFElem::str() const {
  GFElem r = reduced();
  if (r.m_ == 1) return std::to_string(r.c_[0]);
  std::string g = "g" + std::to_string(r.m_);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = r.c_.size(); i-- > 0;) {
    std::uint64_t c = r.c_[i];
    if (!c) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << '*';
    os << g;
    if (i > 1) os << '^' << i;
  }
  if (first) return "0";
  return os.str();
}

GFElem gf_primitive(std::uint32_t p, int m) {
  std::lock_guard<std::recursive_mutex> lock(g_mu);
  Tables &t = tables(p);
  auto it = t.primitive.find(m);
  if (it != t.primitive.end()) return GFElem::from_coeffs(p, m, it->second);
  Fq F = field(p, m);
  Big N = F.order() - 1;
  auto fac = factor(N);
  E x(m, 0);
  for (;;) {
    int i = 0;
    while (i < m && ++x[i] == p) x[i++] = 0;
    if (i == m) throw MathError(Err::RootUnavailable, "no primitive element");
    bool ok = true;
    for (const auto &[r, e] : fac)
      if (F.pow(x, N / r) == F.one()) {
        ok = false;
        break;
      }
    if (ok) break;
  }
  t.primitive[m] = x;
  return GFElem::from_coeffs(p, m, x);
}

Big gf_log(const GFElem &x0, int m) {
  if (x0.is_zero()) throw MathError(Err::ZeroCoefficient, "log of zero");
  GFElem x = x0.lift(m);
  Fq F = field(x.p(), m);
  GFElem g = gf_primitive(x.p(), m);
  Big N = F.order() - 1;
  Big result = 0, modulus_acc = 1;
  for (const auto &[r, e] : factor(N)) {
    Big re;
    mpz_pow_ui(re.get_mpz_t(), r.get_mpz_t(), e);
    Big cof = N / re;
    E gr = F.pow(g.coeffs(), cof), xr = F.pow(x.coeffs(), cof);
    // Digits of the log in base r, each solved by baby-step giant-step in
    // the order-r subgroup generated by h = gr^{r^{e-1}}.
    E h = F.pow(gr, re / r);
    Big rr = r;
    unsigned long s = static_cast<unsigned long>(std::sqrt(rr.get_d())) + 1;
    std::map<E, unsigned long> baby;
    E cur = F.one();
    for (unsigned long j = 0; j < s; ++j) {
      baby.emplace(cur, j);
      cur = F.mul(cur, h);
    }
    E giant = F.inv(F.pow(h, Big(s)));
    Big k = 0, rpow = 1;
    for (unsigned i = 0; i < e; ++i) {
      // target = (xr * gr^{-k})^{r^{e-1-i}}
      E t = F.mul(xr, F.inv(F.pow(gr, k)));
      Big ex;
      mpz_pow_ui(ex.get_mpz_t(), r.get_mpz_t(), e - 1 - i);
      t = F.pow(t, ex);
      E y = t;
      Big digit = -1;
      for (unsigned long a = 0; a <= s; ++a) {
        auto jt = baby.find(y);
        if (jt != baby.end()) {
          digit = Big(a) * s + jt->second;
          break;
        }
        y = F.mul(y, giant);
      }
      if (digit < 0) throw MathError(Err::UnsupportedScalar, "discrete log failed");
      k += digit * rpow;
      rpow *= r;
    }
    // CRT merge of result mod modulus_acc with k mod re.
    Big inv;
    mpz_invert(inv.get_mpz_t(), modulus_acc.get_mpz_t(), re.get_mpz_t());
    Big tcoef = ((k - result) % re + re) % re * inv % re;
    result += modulus_acc * tcoef;
    modulus_acc *= re;
  }
  return ((result % N) + N) % N;
}

std::vector<GFElem> gf_roots(const std::vector<GFElem> &monic, int m) {
  if (monic.empty()) return {};
  std::uint32_t p = monic[0].p();
  Fq F = field(p, m);
  P poly;
  for (const auto &c : monic) poly.push_back(c.lift(m).coeffs());
  std::vector<GFElem> out;
  for (const E &r : fq_roots(F, poly)) out.push_back(GFElem::from_coeffs(p, m, r));
  return out;
}

} // namespace qtb
