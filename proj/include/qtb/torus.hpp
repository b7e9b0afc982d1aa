#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qtb/lattice.hpp"
#include "qtb/scalars.hpp"

namespace qtb {

// Multiplicatively skew-symmetric matrix: q(i,i) = 1, q(j,i) = q(i,j)^{-1}.
class QMatrix {
public:
  QMatrix() = default;
  static QMatrix trivial(const Field &F, std::size_t n);
  // Entries above the diagonal, indexed (i,j) with i < j, 0-based.
  static QMatrix from_upper(const Field &F, std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, Scalar> &upper);
  // Full matrix; rejected unless skew-symmetric.
  static QMatrix from_full(const Field &F, std::vector<std::vector<Scalar>> m);

  std::size_t n() const { return m_.size(); }
  const Scalar &operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const Scalar &one() const { return one_; }
  bool operator==(const QMatrix &o) const { return m_ == o.m_; }

  // Rows/columns for the listed indices, in that order.
  QMatrix restrict(const std::vector<std::size_t> &idx) const;

private:
  Scalar one_;
  std::vector<std::vector<Scalar>> m_;
};

// d(a,b) = prod_{i>j} q_ij^{a_i b_j}, so that x^a x^b = d(a,b) x^{a+b}.
Scalar d_value(const QMatrix &q, const Vec &a, const Vec &b);

struct Monomial {
  Scalar coef;
  Vec exp;
  bool operator==(const Monomial &o) const { return coef == o.coef && exp == o.exp; }
};

Monomial monomial_mul(const QMatrix &q, const Monomial &a, const Monomial &b);
Monomial monomial_inv(const QMatrix &q, const Monomial &a);
Monomial monomial_pow(const QMatrix &q, const Monomial &a, long k);

// Quantum torus data: q, the center lattice with its HNF basis, and c.
class TorusContext {
public:
  TorusContext(const Field &F, const QMatrix &q);

  const Field &field() const { return F_; }
  const QMatrix &q() const { return q_; }
  std::size_t n() const { return q_.n(); }
  const Lattice &gamma_z() const { return gz_; }

  Scalar d(const Vec &a, const Vec &b) const { return d_value(q_, a, b); }
  // (x^{b_1})^{m_1} ... (x^{b_r})^{m_r} = c(g) x^g for g = sum m_i b_i.
  Scalar c_value(const Vec &g) const;
  bool is_central(const Vec &a) const { return gz_.contains(a); }

private:
  Field F_;
  QMatrix q_;
  Lattice gz_;
};

// Finite sum of coefficient * x^exp, no zero coefficients.
class Laurent {
public:
  Laurent() = default;
  static Laurent monomial(const FieldElem &c, const Vec &e);
  static Laurent binomial(const FieldElem &l, const Vec &a, const FieldElem &m, const Vec &b); // l x^a - m x^b

  const std::map<Vec, FieldElem> &terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  void add_term(const Vec &e, const FieldElem &c);

  Laurent operator+(const Laurent &o) const;
  Laurent operator-(const Laurent &o) const;
  Laurent operator-() const;
  Laurent scaled(const FieldElem &c) const;
  bool operator==(const Laurent &o) const;
  bool operator!=(const Laurent &o) const { return !(*this == o); }

  // Terms in decreasing lex order of exponents.
  std::string str() const;

private:
  std::map<Vec, FieldElem> t_;
};

Laurent mul(const QMatrix &q, const Laurent &a, const Laurent &b);

} // namespace qtb
