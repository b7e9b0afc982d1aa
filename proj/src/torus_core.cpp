#include <numeric>

#include "qtb/error.hpp"
#include "qtb/torus.hpp"

namespace qtb {

QMatrix QMatrix::trivial(const Field &F, std::size_t n) {
  QMatrix q;
  q.one_ = F.one();
  q.m_.assign(n, std::vector<Scalar>(n, F.one()));
  return q;
}

QMatrix QMatrix::from_upper(const Field &F, std::size_t n,
                            const std::map<std::pair<std::size_t, std::size_t>, Scalar> &upper) {
  QMatrix q = trivial(F, n);
  for (const auto &[ij, v] : upper) {
    auto [i, j] = ij;
    if (i >= n || j >= n) throw MathError(Err::DimensionMismatch, "q-matrix index out of range");
    if (i == j) {
      if (!v.is_one()) throw MathError(Err::UnsupportedScalar, "q_{ii} must be 1");
      continue;
    }
    F.check(v);
    q.m_[i][j] = v;
    q.m_[j][i] = v.inv();
  }
  return q;
}

QMatrix QMatrix::from_full(const Field &F, std::vector<std::vector<Scalar>> m) {
  std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw MathError(Err::DimensionMismatch, "q-matrix must be square");
    if (!m[i][i].is_one()) throw MathError(Err::UnsupportedScalar, "q_{ii} must be 1");
    for (std::size_t j = 0; j < i; ++j)
      if (!(m[i][j] * m[j][i]).is_one()) throw MathError(Err::UnsupportedScalar, "q-matrix is not skew-symmetric");
  }
  for (const auto &row : m)
    for (const auto &v : row) F.check(v);
  QMatrix q;
  q.one_ = F.one();
  q.m_ = std::move(m);
  return q;
}

QMatrix QMatrix::restrict(const std::vector<std::size_t> &idx) const {
  QMatrix r;
  r.one_ = one_;
  r.m_.resize(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r.m_[a].push_back(m_[idx[a]][idx[b]]);
  return r;
}

Scalar d_value(const QMatrix &q, const Vec &a, const Vec &b) {
  std::size_t n = q.n();
  if (a.size() != n || b.size() != n) throw MathError(Err::DimensionMismatch, "exponent length differs from n");
  Scalar r = q.one();
  for (std::size_t i = 0; i < n; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (!b[j]) continue;
      r = r * q(i, j).pow(Big(static_cast<long>(a[i])) * static_cast<long>(b[j]));
    }
  }
  return r;
}

Monomial monomial_mul(const QMatrix &q, const Monomial &a, const Monomial &b) {
  return {a.coef * b.coef * d_value(q, a.exp, b.exp), vec_add(a.exp, b.exp)};
}

Monomial monomial_inv(const QMatrix &q, const Monomial &a) {
  return {a.coef.inv() * d_value(q, a.exp, a.exp), vec_neg(a.exp)};
}

Monomial monomial_pow(const QMatrix &q, const Monomial &a, long k) {
  Monomial base = k < 0 ? monomial_inv(q, a) : a;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Monomial r{q.one(), Vec(a.exp.size(), 0)};
  while (e) {
    if (e & 1) r = monomial_mul(q, r, base);
    base = monomial_mul(q, base, base);
    e >>= 1;
  }
  return r;
}

namespace {

Big lcm_den(const std::vector<Rat> &v) {
  Big l = 1;
  for (const auto &x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

std::vector<Big> scaled(const std::vector<Rat> &v, const Big &l) {
  std::vector<Big> r;
  for (const auto &x : v) r.push_back(Big(x * Rat(l)));
  return r;
}

// x^a central iff prod_j q_ij^{a_j} = 1 for every i.
Lattice center_lattice(const Field &F, const QMatrix &q) {
  std::size_t n = q.n();
  std::vector<Congruence> eqs;
  if (F.backend == Backend::char0) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rat> z(n);
      std::map<Big, std::vector<Rat>> pr;
      std::map<int, std::vector<Rat>> pa;
      for (std::size_t j = 0; j < n; ++j) {
        const Toric &t = q(i, j).toric();
        z[j] = t.zeta();
        for (const auto &[p, e] : t.primes()) pr.try_emplace(p, n, Rat(0)).first->second[j] = e;
        for (const auto &[k, e] : t.params()) pa.try_emplace(k, n, Rat(0)).first->second[j] = e;
      }
      Big l = lcm_den(z);
      if (l > 1) eqs.push_back({scaled(z, l), l});
      for (const auto &[p, v] : pr) eqs.push_back({scaled(v, lcm_den(v)), 0});
      for (const auto &[k, v] : pa) eqs.push_back({scaled(v, lcm_den(v)), 0});
    }
  } else {
    int m = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m = std::lcm(m, q(i, j).gf().reduced().degree());
    Big Q;
    mpz_ui_pow_ui(Q.get_mpz_t(), F.p, static_cast<unsigned long>(m));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Big> row;
      for (std::size_t j = 0; j < n; ++j) row.push_back(gf_log(q(i, j).gf(), m));
      eqs.push_back({row, Q - 1});
    }
  }
  return integer_kernel(eqs, n);
}

} // namespace

TorusContext::TorusContext(const Field &F, const QMatrix &q) : F_(F), q_(q) {
  for (std::size_t i = 0; i < q.n(); ++i)
    for (std::size_t j = 0; j < q.n(); ++j) F.check(q(i, j));
  gz_ = center_lattice(F, q);
}

Scalar TorusContext::c_value(const Vec &g) const {
  auto m = gz_.solve(g);
  if (!m) throw MathError(Err::NotCentral, vec_str(g) + " is not in the center lattice");
  Monomial acc{F_.one(), Vec(n(), 0)};
  for (std::size_t i = 0; i < m->size(); ++i) {
    if ((*m)[i] == 0) continue;
    acc = monomial_mul(q_, acc, monomial_pow(q_, Monomial{F_.one(), gz_.row(i)}, (*m)[i]));
  }
  return acc.coef;
}

// ---------------------------------------------------------------------------

Laurent Laurent::monomial(const FieldElem &c, const Vec &e) {
  Laurent r;
  r.add_term(e, c);
  return r;
}

Laurent Laurent::binomial(const FieldElem &l, const Vec &a, const FieldElem &m, const Vec &b) {
  Laurent r;
  r.add_term(a, l);
  r.add_term(b, -m);
  return r;
}

void Laurent::add_term(const Vec &e, const FieldElem &c) {
  if (c.is_zero()) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) t_.erase(it);
}

Laurent Laurent::operator+(const Laurent &o) const {
  Laurent r = *this;
  for (const auto &[e, c] : o.t_) r.add_term(e, c);
  return r;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto &[e, c] : r.t_) c = -c;
  return r;
}

Laurent Laurent::operator-(const Laurent &o) const { return *this + (-o); }

Laurent Laurent::scaled(const FieldElem &c) const {
  Laurent r;
  if (c.is_zero()) return r;
  for (const auto &[e, v] : t_) r.t_.emplace(e, c * v);
  return r;
}

bool Laurent::operator==(const Laurent &o) const {
  if (t_.size() != o.t_.size()) return false;
  auto it = o.t_.begin();
  for (const auto &[e, c] : t_) {
    if (e != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

namespace {

bool needs_parens(const std::string &s) {
  int depth = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (depth == 0 && (c == '+' || (c == '-' && s[i - 1] != '^'))) return true;
  }
  return s.find(")/(") != std::string::npos;
}

std::string exp_str(const Vec &e) {
  std::string s = "x^(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

} // namespace

std::string Laurent::str() const {
  if (t_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    std::string c = it->second.str();
    bool neg = false;
    if (it->second.backend() == Backend::charp && !needs_parens(c)) {
      // -1 reads better than p-1
      std::string m = (-it->second).str();
      if (!needs_parens(m) && (m.size() < c.size() || (m.size() == c.size() && m < c))) c = "-" + m;
    }
    if (needs_parens(c)) c = "(" + c + ")";
    else if (c[0] == '-') {
      neg = true;
      c = c.substr(1);
    }
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    if (c != "1") out += c + "*";
    out += exp_str(it->first);
  }
  return out;
}

Laurent mul(const QMatrix &q, const Laurent &a, const Laurent &b) {
  Laurent r;
  for (const auto &[ea, ca] : a.terms())
    for (const auto &[eb, cb] : b.terms()) r.add_term(vec_add(ea, eb), ca * cb * FieldElem(d_value(q, ea, eb)));
  return r;
}

} // namespace qtb
