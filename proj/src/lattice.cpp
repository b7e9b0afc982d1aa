#include "qtb/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "qtb/error.hpp"

namespace qtb {

namespace {

using BRow = std::vector<Big>;

BRow to_big(const Vec &v) {
  BRow r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Big(static_cast<long>(v[i]));
  return r;
}

Vec from_big(const BRow &r) {
  Vec v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = to_i64(r[i]);
  return v;
}

void axpy(BRow &dst, const Big &k, const BRow &src) {
  if (k == 0) return;
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= k * src[i];
}

// Row-style HNF over Z of the given rows (all of width n).
std::vector<BRow> hnf_big(std::vector<BRow> rows, std::size_t n) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Big q;
        mpz_tdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
        axpy(rows[i], q, rows[r]);
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto &x : rows[r]) x = -x;
    for (std::size_t k = 0; k < r; ++k) {
      Big q;
      mpz_fdiv_q(q.get_mpz_t(), rows[k][col].get_mpz_t(), rows[r][col].get_mpz_t());
      axpy(rows[k], q, rows[r]);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::size_t lead_col(const Vec &row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return j;
  return row.size();
}

} // namespace

std::int64_t to_i64(const Big &x) {
  if (!x.fits_slong_p()) throw MathError(Err::Overflow, "integer " + x.get_str() + " exceeds 64 bits");
  return x.get_si();
}

Vec vec_add(const Vec &a, const Vec &b) {
  if (a.size() != b.size()) throw MathError(Err::DimensionMismatch, "vector lengths differ");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vec_sub(const Vec &a, const Vec &b) {
  if (a.size() != b.size()) throw MathError(Err::DimensionMismatch, "vector lengths differ");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vec_neg(const Vec &a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Vec vec_scale(const Vec &a, std::int64_t k) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

bool vec_is_zero(const Vec &a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

std::string vec_str(const Vec &a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

Lattice Lattice::from_rows(const std::vector<Vec> &rows, std::size_t n) {
  std::vector<BRow> big;
  big.reserve(rows.size());
  for (const auto &r : rows) {
    if (r.size() != n)
      throw MathError(Err::DimensionMismatch,
                      "row " + vec_str(r) + " has length " + std::to_string(r.size()) + ", expected " +
                          std::to_string(n));
    big.push_back(to_big(r));
  }
  Lattice L(n);
  for (auto &r : hnf_big(std::move(big), n)) L.rows_.push_back(from_big(r));
  return L;
}

Lattice Lattice::full(std::size_t n) {
  Lattice L(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    L.rows_.push_back(e);
  }
  return L;
}

std::vector<std::size_t> Lattice::pivots() const {
  std::vector<std::size_t> p;
  for (const auto &r : rows_) p.push_back(lead_col(r));
  return p;
}

std::optional<Vec> Lattice::solve(const Vec &a) const {
  if (a.size() != n_) throw MathError(Err::DimensionMismatch, "vector " + vec_str(a) + " not in Z^" + std::to_string(n_));
  BRow res = to_big(a);
  Vec coeffs(rows_.size());
  std::size_t col = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t p = lead_col(rows_[i]);
    for (; col < p; ++col)
      if (res[col] != 0) return std::nullopt;
    Big piv(static_cast<long>(rows_[i][p]));
    if (!mpz_divisible_p(res[p].get_mpz_t(), piv.get_mpz_t())) return std::nullopt;
    Big q = res[p] / piv;
    coeffs[i] = to_i64(q);
    axpy(res, q, to_big(rows_[i]));
    col = p + 1;
  }
  for (; col < n_; ++col)
    if (res[col] != 0) return std::nullopt;
  return coeffs;
}

bool Lattice::subset_of(const Lattice &other) const {
  if (n_ != other.n_) return false;
  return std::all_of(rows_.begin(), rows_.end(), [&](const Vec &r) { return other.contains(r); });
}

Vec Lattice::combine(const Vec &coeffs) const {
  if (coeffs.size() != rows_.size()) throw MathError(Err::DimensionMismatch, "coefficient count differs from rank");
  BRow acc(n_, Big(0));
  for (std::size_t i = 0; i < rows_.size(); ++i) axpy(acc, Big(static_cast<long>(-coeffs[i])), to_big(rows_[i]));
  return from_big(acc);
}

Vec Lattice::coset_rep(const Vec &a) const {
  if (a.size() != n_) throw MathError(Err::DimensionMismatch, "vector " + vec_str(a) + " not in Z^" + std::to_string(n_));
  BRow res = to_big(a);
  for (const auto &row : rows_) {
    std::size_t p = lead_col(row);
    Big q;
    Big piv(static_cast<long>(row[p]));
    mpz_fdiv_q(q.get_mpz_t(), res[p].get_mpz_t(), piv.get_mpz_t());
    axpy(res, q, to_big(row));
  }
  return from_big(res);
}

Big Lattice::index() const {
  if (rows_.size() != n_) return 0;
  Big r = 1;
  for (std::size_t i = 0; i < n_; ++i) r *= static_cast<long>(rows_[i][i]);
  return r;
}

Lattice Lattice::operator+(const Lattice &o) const {
  if (n_ != o.n_) throw MathError(Err::DimensionMismatch, "lattices in different ambient dimensions");
  std::vector<Vec> all = rows_;
  all.insert(all.end(), o.rows_.begin(), o.rows_.end());
  return from_rows(all, n_);
}

std::string Lattice::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_.size(); ++i) os << (i ? "," : "") << vec_str(rows_[i]);
  os << ']';
  return os.str();
}

std::optional<Vec> solve_in_basis(const std::vector<Vec> &B, const Vec &a) {
  std::size_t r = B.size(), n = a.size();
  // Columns of the augmented system are the rows of B plus the target.
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(r + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      if (B[i].size() != n) throw MathError(Err::DimensionMismatch, "basis row length");
      m[j][i] = static_cast<long>(B[i][j]);
    }
    m[j][r] = static_cast<long>(a[j]);
  }
  std::vector<std::size_t> pivcol;
  std::size_t row = 0;
  for (std::size_t c = 0; c < r && row < n; ++c) {
    std::size_t p = row;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    for (std::size_t k = 0; k <= r; ++k)
      if (k != c) m[row][k] /= m[row][c];
    m[row][c] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (std::size_t k = 0; k <= r; ++k) m[i][k] -= f * m[row][k];
    }
    pivcol.push_back(c);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (m[i][r] != 0) return std::nullopt;
  Vec x(r, 0);
  for (std::size_t i = 0; i < pivcol.size(); ++i) {
    const mpq_class &v = m[i][r];
    if (v.get_den() != 1) return std::nullopt;
    x[pivcol[i]] = to_i64(v.get_num());
  }
  return x;
}

AdaptedBasis adapted_basis(const Lattice &L_sub, const Lattice &L_sup) {
  if (L_sub.dim() != L_sup.dim()) throw MathError(Err::DimensionMismatch, "lattices in different ambient dimensions");
  if (!L_sub.subset_of(L_sup)) throw MathError(Err::NotSublattice, L_sub.str() + " is not contained in " + L_sup.str());
  std::size_t rs = L_sub.rank(), R = L_sup.rank();
  std::vector<BRow> M(rs, BRow(R));
  for (std::size_t i = 0; i < rs; ++i) {
    Vec c = *L_sup.solve(L_sub.row(i));
    for (std::size_t j = 0; j < R; ++j) M[i][j] = static_cast<long>(c[j]);
  }
  std::vector<BRow> F;
  for (const auto &r : L_sup.basis()) F.push_back(to_big(r));

  auto col_add = [&](std::size_t j, const Big &k, std::size_t i) {
    // col_j += k * col_i, compensated on F by row_i -= k * row_j.
    for (auto &row : M) row[j] += k * row[i];
    for (std::size_t c = 0; c < F[i].size(); ++c) F[i][c] -= k * F[j][c];
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (auto &row : M) std::swap(row[a], row[b]);
    std::swap(F[a], F[b]);
  };

  for (std::size_t t = 0; t < rs; ++t) {
    for (;;) {
      std::size_t bi = rs, bj = R;
      for (std::size_t i = t; i < rs; ++i)
        for (std::size_t j = t; j < R; ++j)
          if (M[i][j] != 0 && (bi == rs || abs(M[i][j]) < abs(M[bi][bj]))) bi = i, bj = j;
      if (bi == rs) break;
      std::swap(M[t], M[bi]);
      if (bj != t) col_swap(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rs; ++i) {
        if (M[i][t] == 0) continue;
        Big q = M[i][t] / M[t][t];
        axpy(M[i], q, M[t]);
        if (M[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < R; ++j) {
        if (M[t][j] == 0) continue;
        Big q = M[t][j] / M[t][t];
        col_add(j, Big(-q), t);
        if (M[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < rs && divides; ++i)
        for (std::size_t j = t + 1; j < R; ++j)
          if (!mpz_divisible_p(M[i][j].get_mpz_t(), M[t][t].get_mpz_t())) {
            for (std::size_t c = 0; c < R; ++c) M[t][c] += M[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (M[t][t] < 0)
      for (auto &x : M[t]) x = -x;
  }

  AdaptedBasis out;
  for (const auto &r : F) out.sup_basis.push_back(from_big(r));
  for (std::size_t t = 0; t < rs; ++t) {
    out.factors.push_back(to_i64(M[t][t]));
    out.torsion_order *= M[t][t];
  }
  out.free_rank = R - rs;
  return out;
}

Lattice saturate(const Lattice &L, const Lattice &ambient, SatMode mode, std::int64_t p) {
  AdaptedBasis ab = adapted_basis(L, ambient);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < ab.factors.size(); ++i) {
    std::int64_t d = ab.factors[i];
    std::int64_t ppart = 1;
    if (mode != SatMode::full) {
      if (p < 2) throw MathError(Err::DimensionMismatch, "saturation needs a prime p");
      while (d % (ppart * p) == 0) ppart *= p;
    }
    std::int64_t k = mode == SatMode::full ? 1 : mode == SatMode::p_part ? d / ppart : ppart;
    rows.push_back(vec_scale(ab.sup_basis[i], k));
  }
  return Lattice::from_rows(rows, L.dim());
}

Lattice integer_kernel(const std::vector<Congruence> &eqs, std::size_t n) {
  std::size_t nmod = 0;
  for (const auto &e : eqs) {
    if (e.coeffs.size() != n) throw MathError(Err::DimensionMismatch, "equation length");
    if (e.modulus != 0) ++nmod;
  }
  std::size_t R = eqs.size(), C = n + nmod;
  // Rows are (column of A | identity) so the HNF exposes the kernel in the
  // rows whose A-part vanishes.
  std::vector<BRow> rows(C, BRow(R + C, Big(0)));
  std::size_t slack = n;
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[j][i] = eqs[i].coeffs[j];
    if (eqs[i].modulus != 0) rows[slack++][i] = -eqs[i].modulus;
  }
  for (std::size_t c = 0; c < C; ++c) rows[c][R + c] = 1;
  std::vector<Vec> ker;
  for (const auto &row : hnf_big(std::move(rows), R + C)) {
    bool zero = true;
    for (std::size_t i = 0; i < R; ++i)
      if (row[i] != 0) zero = false;
    if (!zero) continue;
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = to_i64(row[R + j]);
    ker.push_back(v);
  }
  return Lattice::from_rows(ker, n);
}

HnfTransform hnf_transform(const std::vector<Vec> &rows, std::size_t n) {
  std::size_t k = rows.size();
  std::vector<BRow> aug;
  for (std::size_t s = 0; s < k; ++s) {
    if (rows[s].size() != n) throw MathError(Err::DimensionMismatch, "row length differs from ambient dimension");
    BRow r = to_big(rows[s]);
    r.resize(n + k, Big(0));
    r[n + s] = 1;
    aug.push_back(std::move(r));
  }
  HnfTransform out;
  for (auto &row : hnf_big(std::move(aug), n + k)) {
    bool lattice_part = false;
    for (std::size_t j = 0; j < n; ++j)
      if (row[j] != 0) lattice_part = true;
    std::vector<Big> coeffs(row.begin() + n, row.end());
    if (lattice_part) {
      out.hnf.push_back(from_big(BRow(row.begin(), row.begin() + n)));
      out.hnf_coeffs.push_back(std::move(coeffs));
    } else {
      out.relations.push_back(std::move(coeffs));
    }
  }
  return out;
}

} // namespace qtb
