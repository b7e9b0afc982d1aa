#include <algorithm>
#include <functional>
#include <numeric>
#include <map>
#include <sstream>

#include "qtb/error.hpp"
#include "qtb/quotient.hpp"

namespace qtb {

namespace {

// Row echelon form over FieldElem on sparse rows; the pivot of a row is its
// smallest column.
class SparseEchelon {
public:
  using Row = std::map<std::size_t, FieldElem>;
  bool add(Row r) {
    reduce(r);
    if (r.empty()) return false;
    FieldElem inv = r.begin()->second.inv();
    for (auto &[k, v] : r) v = v * inv;
    rows_.emplace(r.begin()->first, std::move(r));
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

private:
  void reduce(Row &r) const {
    auto it = r.begin();
    while (it != r.end()) {
      auto p = rows_.find(it->first);
      if (p == rows_.end()) {
        ++it;
        continue;
      }
      FieldElem c = it->second;
      std::size_t col = it->first;
      for (const auto &[k, v] : p->second) {
        auto slot = r.find(k);
        if (slot == r.end()) {
          r.emplace(k, -(c * v));
          continue;
        }
        slot->second = slot->second - c * v;
        if (slot->second.is_zero()) r.erase(slot);
      }
      it = r.upper_bound(col);
    }
  }
  std::map<std::size_t, Row> rows_;
};

std::size_t center_dim(const FinDimAlgebra &A) {
  std::size_t d = A.dim;
  // equation (j, k): sum_i a_i [e_i, e_j]_k = 0
  std::map<std::pair<std::size_t, std::size_t>, SparseEchelon::Row> eqs;
  auto acc = [&](std::size_t j, std::size_t k, std::size_t i, const FieldElem &v) {
    auto &row = eqs[{j, k}];
    auto slot = row.find(i);
    if (slot == row.end()) row.emplace(i, v);
    else if ((slot->second = slot->second + v).is_zero()) row.erase(slot);
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      for (const auto &[k, v] : A.product(i, j)) acc(j, k, i, v);
      for (const auto &[k, v] : A.product(j, i)) acc(j, k, i, -v);
    }
  SparseEchelon E;
  for (auto &[key, row] : eqs)
    if (!row.empty()) E.add(row);
  return d - E.rank();
}

std::size_t radical_dim_char0(const FinDimAlgebra &A) {
  std::size_t d = A.dim;
  std::vector<FieldElem> tr(d, A.F.zero());
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (const auto &[t, v] : A.product(k, i))
        if (t == i) tr[k] = tr[k] + v;
  SparseEchelon E;
  for (std::size_t i = 0; i < d; ++i) {
    SparseEchelon::Row row;
    for (std::size_t j = 0; j < d; ++j) {
      FieldElem s = A.F.zero();
      for (const auto &[k, v] : A.product(i, j)) s = s + v * tr[k];
      if (!s.is_zero()) row[j] = s;
    }
    E.add(row);
  }
  return d - E.rank();
}

// --- characteristic p: the algebra as an F_p-algebra of dimension d * M ---

using ModVec = std::vector<std::int64_t>;

struct FpAlgebra {
  std::int64_t p;
  int M;
  std::size_t d, N;
  // structure constants lifted into GF(p^M)
  std::vector<std::vector<std::pair<std::size_t, GFElem>>> mult;
  std::vector<GFElem> omega; // F_p basis of GF(p^M)

  GFElem to_gf(const ModVec &a, std::size_t i) const {
    std::vector<std::uint64_t> c(M);
    for (int t = 0; t < M; ++t) c[t] = static_cast<std::uint64_t>(a[i * M + t]);
    return GFElem::from_coeffs(p, M, c);
  }

  ModVec mul(const ModVec &a, const ModVec &b) const {
    std::vector<GFElem> out(d, GFElem::from_int(p, 0).lift(M));
    std::vector<GFElem> A(d), B(d);
    std::vector<bool> az(d), bz(d);
    for (std::size_t i = 0; i < d; ++i) {
      A[i] = to_gf(a, i);
      B[i] = to_gf(b, i);
      az[i] = A[i].is_zero();
      bz[i] = B[i].is_zero();
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (az[i]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (bz[j]) continue;
        GFElem ab = A[i] * B[j];
        for (const auto &[k, v] : mult[i * d + j]) out[k] = out[k] + ab * v;
      }
    }
    ModVec r(N, 0);
    for (std::size_t k = 0; k < d; ++k) {
      GFElem x = out[k].lift(M);
      const auto &c = x.coeffs();
      for (int t = 0; t < M && t < static_cast<int>(c.size()); ++t) r[k * M + t] = static_cast<std::int64_t>(c[t]);
    }
    return r;
  }

  ModVec unit_vec(std::size_t u) const {
    ModVec v(N, 0);
    v[u] = 1;
    return v;
  }

  // left multiplication matrix, column u = a * basis_u
  std::vector<ModVec> left_matrix(const ModVec &a) const {
    std::vector<ModVec> cols(N);
    for (std::size_t u = 0; u < N; ++u) cols[u] = mul(a, unit_vec(u));
    std::vector<ModVec> m(N, ModVec(N));
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m[r][c] = cols[c][r];
    return m;
  }
};

std::int64_t modp(std::int64_t x, std::int64_t m) {
  x %= m;
  return x < 0 ? x + m : x;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, e = p - 2;
  a = modp(a, p);
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

// Reduced row echelon basis of a subspace of F_p^N.
struct ModSpace {
  std::int64_t p;
  std::vector<ModVec> rows;
  std::vector<std::size_t> piv;

  static ModSpace from(std::int64_t p, std::vector<ModVec> vs) {
    ModSpace S{p, {}, {}};
    for (auto &v : vs) S.insert(v);
    return S;
  }
  void insert(ModVec v) {
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (v[piv[k]]) {
        std::int64_t c = v[piv[k]];
        for (std::size_t t = 0; t < v.size(); ++t) v[t] = modp(v[t] - c * rows[k][t], p);
      }
    std::size_t c = 0;
    while (c < v.size() && v[c] == 0) ++c;
    if (c == v.size()) return;
    std::int64_t inv = inv_mod(v[c], p);
    for (auto &x : v) x = x * inv % p;
    for (auto &r : rows)
      if (r[c]) {
        std::int64_t k = r[c];
        for (std::size_t t = 0; t < r.size(); ++t) r[t] = modp(r[t] - k * v[t], p);
      }
    rows.push_back(v);
    piv.push_back(c);
  }
  // coordinates of v (assumed in the span)
  std::vector<std::int64_t> coords(const ModVec &v) const {
    std::vector<std::int64_t> c(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) c[k] = v[piv[k]];
    return c;
  }
};

// x with sum_t x_t G[t] = 0
std::vector<std::vector<std::int64_t>> left_kernel(const std::vector<ModVec> &G, std::int64_t p) {
  std::size_t s = G.size();
  if (s == 0) return {};
  std::size_t cols = G[0].size();
  // augment with identity and row reduce
  std::vector<ModVec> aug(s);
  for (std::size_t t = 0; t < s; ++t) {
    aug[t] = G[t];
    aug[t].resize(cols + s, 0);
    aug[t][cols + t] = 1;
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < s; ++c) {
    std::size_t k = r;
    while (k < s && aug[k][c] == 0) ++k;
    if (k == s) continue;
    std::swap(aug[k], aug[r]);
    std::int64_t inv = inv_mod(aug[r][c], p);
    for (auto &x : aug[r]) x = x * inv % p;
    for (std::size_t t = 0; t < s; ++t)
      if (t != r && aug[t][c]) {
        std::int64_t m = aug[t][c];
        for (std::size_t u = 0; u < aug[t].size(); ++u) aug[t][u] = modp(aug[t][u] - m * aug[r][u], p);
      }
    ++r;
  }
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t t = r; t < s; ++t) out.emplace_back(aug[t].begin() + cols, aug[t].end());
  return out;
}

// g_i(x) = tr(X^{p^i}) / p^i mod p for the integer lift X of left mult by x.
std::int64_t ciw_g(const FpAlgebra &A, const ModVec &x, int i) {
  std::int64_t mod = 1;
  for (int k = 0; k <= i; ++k) mod *= A.p;
  auto X = A.left_matrix(x);
  std::size_t N = A.N;
  auto matmul = [&](const std::vector<ModVec> &a, const std::vector<ModVec> &b) {
    std::vector<ModVec> c(N, ModVec(N, 0));
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        if (!a[r][k]) continue;
        for (std::size_t s = 0; s < N; ++s) c[r][s] = (c[r][s] + a[r][k] * b[k][s]) % mod;
      }
    return c;
  };
  std::vector<ModVec> P = X;
  for (int k = 0; k < i; ++k) {
    std::vector<ModVec> Q = P;
    for (std::int64_t t = 1; t < A.p; ++t) Q = matmul(Q, P);
    P = Q;
  }
  std::int64_t tr = 0;
  for (std::size_t r = 0; r < N; ++r) tr = (tr + P[r][r]) % mod;
  std::int64_t pi = mod / A.p;
  if (tr % pi != 0) throw MathError(Err::Incompatible, "trace not divisible in the radical iteration");
  return (tr / pi) % A.p;
}

std::size_t radical_dim_charp(const FinDimAlgebra &A) {
  FpAlgebra B;
  B.p = A.F.p;
  B.d = A.dim;
  int M = 1;
  for (const auto &cell : A.mult)
    for (const auto &[k, v] : cell) {
      int m = v.gf().reduced().degree();
      M = std::lcm(M, m);
    }
  B.M = M;
  B.N = B.d * M;
  B.mult.resize(A.mult.size());
  for (std::size_t c = 0; c < A.mult.size(); ++c)
    for (const auto &[k, v] : A.mult[c]) B.mult[c].emplace_back(k, v.gf().reduced().lift(M));
  std::size_t N = B.N;
  // full space, then the trace step and the higher steps
  std::vector<ModVec> basis;
  for (std::size_t u = 0; u < N; ++u) basis.push_back(B.unit_vec(u));
  int levels = 0;
  for (std::int64_t pw = B.p; pw <= static_cast<std::int64_t>(N); pw *= B.p) ++levels;
  for (int i = 0; i <= levels && !basis.empty(); ++i) {
    ModSpace S = ModSpace::from(B.p, basis);
    std::vector<std::int64_t> gw(S.rows.size());
    for (std::size_t t = 0; t < S.rows.size(); ++t) gw[t] = ciw_g(B, S.rows[t], i);
    std::vector<ModVec> G(S.rows.size(), ModVec(N, 0));
    for (std::size_t t = 0; t < S.rows.size(); ++t)
      for (std::size_t j = 0; j < N; ++j) {
        ModVec prod = B.mul(S.rows[t], B.unit_vec(j));
        auto c = S.coords(prod);
        std::int64_t v = 0;
        for (std::size_t k = 0; k < c.size(); ++k) v = (v + c[k] * gw[k]) % B.p;
        G[t][j] = v;
      }
    std::vector<ModVec> next;
    for (const auto &x : left_kernel(G, B.p)) {
      ModVec v(N, 0);
      for (std::size_t t = 0; t < x.size(); ++t)
        if (x[t])
          for (std::size_t u = 0; u < N; ++u) v[u] = (v[u] + x[t] * S.rows[t][u]) % B.p;
      next.push_back(v);
    }
    basis = next;
  }
  std::size_t fp_dim = ModSpace::from(B.p, basis).rows.size();
  if (fp_dim % M != 0) throw MathError(Err::Incompatible, "radical is not a subspace over the base field");
  return fp_dim / M;
}

} // namespace

OracleReport findim_oracle(const FinDimAlgebra &A, std::size_t bound) {
  if (A.dim > bound) throw MathError(Err::DimensionTooLarge, "algebra of dimension " + std::to_string(A.dim) + " exceeds " + std::to_string(bound));
  if (A.mult.size() != A.dim * A.dim) throw MathError(Err::DimensionMismatch, "structure constant table has the wrong size");
  OracleReport r;
  r.jacobson_radical_dim = A.F.backend == Backend::char0 ? radical_dim_char0(A) : radical_dim_charp(A);
  r.center_dim = center_dim(A);
  r.is_semiprime = r.jacobson_radical_dim == 0;
  r.is_prime = r.is_semiprime && r.center_dim == 1;
  return r;
}

// ---------------------------------------------------------------------------

TwistedGroupAlgebra::TwistedGroupAlgebra(const TorusContext &ctx, const TorusIdeal &I) : ctx_(ctx), I_(I) {
  if (I.is_unit()) throw MathError(Err::WholeRingIdeal, "the quotient by the unit ideal is zero");
  auto ab = adapted_basis(I.lattice(), Lattice::full(ctx.n()));
  for (auto f : ab.factors)
    if (f > 1) torsion_.push_back(f);
  free_rank_ = ctx.n() - I.lattice().rank();
}

Big TwistedGroupAlgebra::order() const {
  if (!finite()) return 0;
  Big r = 1;
  for (auto t : torsion_) r *= static_cast<long>(t);
  return r;
}

std::pair<Scalar, Vec> TwistedGroupAlgebra::product(const Vec &s, const Vec &t) const {
  Vec sum = vec_add(s, t);
  Vec g = rep(sum);
  Vec a = vec_sub(sum, g);
  Scalar coef = ctx_.d(s, t) * ctx_.d(g, a).inv() * binomial_value(ctx_, I_, a);
  return {coef, g};
}

std::vector<Vec> TwistedGroupAlgebra::basis() const {
  if (!finite()) throw MathError(Err::DimensionTooLarge, "quotient is infinite-dimensional");
  // representatives are the points of the box [0, pivot) in HNF coordinates
  std::vector<Vec> out;
  std::size_t n = ctx_.n();
  Vec cur(n, 0);
  const auto &L = I_.lattice();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t k = 0; k < L.row(i)[i]; ++k) {
      cur[i] = k;
      rec(i + 1);
    }
    cur[i] = 0;
  };
  rec(0);
  for (auto &v : out) v = rep(v);
  std::sort(out.begin(), out.end());
  return out;
}

FinDimAlgebra TwistedGroupAlgebra::algebra(std::size_t bound) const {
  if (!finite()) throw MathError(Err::DimensionTooLarge, "quotient is infinite-dimensional");
  if (order() > static_cast<long>(bound)) throw MathError(Err::DimensionTooLarge, "quotient of dimension " + order().get_str() + " exceeds " + std::to_string(bound));
  auto B = basis();
  std::map<Vec, std::size_t> idx;
  for (std::size_t i = 0; i < B.size(); ++i) idx[B[i]] = i;
  FinDimAlgebra A;
  A.F = ctx_.field();
  A.dim = B.size();
  A.mult.resize(A.dim * A.dim);
  for (std::size_t i = 0; i < A.dim; ++i)
    for (std::size_t j = 0; j < A.dim; ++j) {
      auto [c, g] = product(B[i], B[j]);
      A.mult[i * A.dim + j] = {{idx.at(g), FieldElem(c)}};
    }
  return A;
}

std::string TwistedGroupAlgebra::table(std::size_t bound) const {
  if (order() > static_cast<long>(bound)) throw MathError(Err::DimensionTooLarge, "quotient of dimension " + order().get_str() + " exceeds " + std::to_string(bound));
  auto B = basis();
  std::ostringstream os;
  for (const auto &s : B)
    for (const auto &t : B) {
      auto [c, g] = product(s, t);
      os << vec_str(s) << " * " << vec_str(t) << " = " << c.str() << " " << vec_str(g) << "\n";
    }
  return os.str();
}

// ---------------------------------------------------------------------------

Vec AbelianGroup::reduce(const Vec &g) const {
  if (g.size() != orders.size()) throw MathError(Err::DimensionMismatch, "group element of the wrong length");
  Vec r = g;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (orders[i] > 0) r[i] = modp(r[i], orders[i]);
  return r;
}

namespace {

// coef * y_g
struct GroupTerm {
  Scalar coef;
  Vec g;
};

GroupTerm gmul(const AbelianGroup &G, const Cocycle &e, const GroupTerm &a, const GroupTerm &b) {
  return {a.coef * b.coef * e(a.g, b.g), G.reduce(vec_add(a.g, b.g))};
}

// The scalar mu(alpha) with y_{g_1}^{alpha_1} ... y_{g_n}^{alpha_n} = mu(alpha) y_{pi(alpha)}.
Scalar mu_of(const AbelianGroup &G, const Cocycle &e, const Vec &alpha) {
  std::size_t n = G.rank();
  Vec zero(n, 0);
  Scalar e00 = e(zero, zero);
  GroupTerm acc{e00.inv(), zero};
  for (std::size_t i = 0; i < n; ++i) {
    Vec gi(n, 0);
    gi[i] = 1;
    gi = G.reduce(gi);
    GroupTerm y{e00 * e00.inv(), gi};
    if (alpha[i] < 0) {
      Vec ng = G.reduce(vec_neg(gi));
      y = GroupTerm{(e(gi, ng) * e00).inv(), ng};
    }
    for (std::int64_t k = 0; k < std::abs(alpha[i]); ++k) acc = gmul(G, e, acc, y);
  }
  return acc.coef;
}

} // namespace

CocyclePresentation from_group_cocycle(const Field &F, const AbelianGroup &G, const Cocycle &e) {
  std::size_t n = G.rank();
  for (auto o : G.orders)
    if (o < 0) throw MathError(Err::DimensionMismatch, "negative cyclic order");
  // sample of elements: all torsion values, free coordinates in [-1, 1]
  std::vector<Vec> sample{Vec(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> next;
    std::int64_t lo = G.orders[i] > 0 ? 0 : -1, hi = G.orders[i] > 0 ? G.orders[i] - 1 : 1;
    for (const auto &v : sample)
      for (std::int64_t k = lo; k <= hi; ++k) {
        Vec w = v;
        w[i] = k;
        next.push_back(w);
      }
    sample = std::move(next);
  }
  std::vector<Vec> third = sample;
  if (sample.size() > 16) {
    third.clear();
    third.push_back(Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      Vec gi(n, 0);
      gi[i] = 1;
      third.push_back(G.reduce(gi));
      third.push_back(G.reduce(vec_neg(gi)));
    }
  }
  // all triples for small groups, otherwise the first entry runs over generators too
  const std::vector<Vec> &first = sample.size() * sample.size() * third.size() > 20000 ? third : sample;
  for (const auto &g : first)
    for (const auto &h : sample) {
      Vec gh = G.reduce(vec_add(g, h));
      for (const auto &k : third) {
        Scalar lhs = e(g, h) * e(gh, k);
        Scalar rhs = e(h, k) * e(g, G.reduce(vec_add(h, k)));
        if (!(lhs == rhs))
          throw MathError(Err::NotCocycle, "cocycle identity fails at " + vec_str(g) + ", " + vec_str(h) + ", " + vec_str(k));
      }
    }
  std::map<std::pair<std::size_t, std::size_t>, Scalar> up;
  auto gen = [&](std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return G.reduce(v);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) up[{i, j}] = e(gen(i), gen(j)) * e(gen(j), gen(i)).inv();
  QMatrix q = QMatrix::from_upper(F, n, up);
  TorusContext ctx(F, q);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < n; ++i)
    if (G.orders[i] > 0) {
      Vec r(n, 0);
      r[i] = G.orders[i];
      rows.push_back(r);
    }
  Lattice L = Lattice::from_rows(rows, n);
  Scalar mu0 = mu_of(G, e, Vec(n, 0));
  std::vector<Scalar> rho;
  for (const auto &b : L.basis()) rho.push_back(ctx.c_value(b) * mu_of(G, e, b) * mu0.inv());
  return {q, TorusIdeal::make(ctx, L, rho)};
}

AffineIdeal toric_presentation(const Field &F, const std::vector<Vec> &S, const QMatrix &q, const QMatrix *target) {
  std::size_t m = S.size();
  if (q.n() != m) throw MathError(Err::DimensionMismatch, "q has size " + std::to_string(q.n()) + " for " + std::to_string(m) + " letters");
  std::size_t k = m ? S[0].size() : 0;
  for (const auto &s : S)
    if (s.size() != k) throw MathError(Err::DimensionMismatch, "monoid generators of different lengths");
  // kernel of Z^m -> Z^k, e_i -> s_i
  std::vector<Congruence> eqs;
  for (std::size_t r = 0; r < k; ++r) {
    Congruence c;
    for (std::size_t i = 0; i < m; ++i) c.coeffs.push_back(Big(static_cast<long>(S[i][r])));
    eqs.push_back(c);
  }
  Lattice L = integer_kernel(eqs, m);
  TorusContext ctx(F, q);
  if (!L.subset_of(ctx.gamma_z()))
    throw MathError(Err::Incompatible, "relations " + L.str() + " of the monoid are not central for q");
  if (target) {
    if (target->n() != k) throw MathError(Err::DimensionMismatch, "target has size " + std::to_string(target->n()) + ", generators live in Z^" + std::to_string(k));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (q(i, j) != d_value(*target, S[i], S[j]) * d_value(*target, S[j], S[i]).inv())
          throw MathError(Err::Incompatible, "q is not the pullback of the target at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  }
  std::vector<Scalar> rho;
  for (const auto &b : L.basis()) {
    Scalar nu = q.one();
    if (target) {
      // image of the ordered monomial x^b is nu * y^0
      Monomial img{q.one(), Vec(k, 0)};
      for (std::size_t i = 0; i < m; ++i) img = monomial_mul(*target, img, monomial_pow(*target, Monomial{q.one(), S[i]}, b[i]));
      nu = img.coef;
    }
    rho.push_back(ctx.c_value(b) * nu);
  }
  return contract_from_torus(ctx, TorusIdeal::make(ctx, L, rho));
}

QhatPresentation qhat_presentation(const Field &F, const QMatrix &q) {
  std::size_t n = q.n();
  std::vector<std::vector<Scalar>> m(2 * n, std::vector<Scalar>(2 * n, q.one()));
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) {
      if (i < n && j < n) m[i][j] = q(i, j);
      else if (i >= n && j >= n) m[i][j] = q(i - n, j - n);
      else if (i < n) m[i][j] = q(j - n, i);
      else m[i][j] = q(j, i - n);
    }
  QhatPresentation out{QMatrix::from_full(F, m), {}};
  for (std::size_t i = 0; i < n; ++i) {
    Vec a(2 * n, 0);
    a[i] = a[i + n] = 1;
    out.generators.push_back(Laurent::binomial(F.unit(), a, F.unit(), Vec(2 * n, 0)));
  }
  return out;
}

} // namespace qtb
