#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtb/torus_ideals.hpp"

namespace qtb {

// x^lead -> nu x^tail, or x^lead -> 0 when `zero`.
struct Rule {
  Vec lead;
  bool zero = false;
  Scalar nu;
  Vec tail;
  bool operator==(const Rule &o) const {
    return lead == o.lead && zero == o.zero && (zero || (nu == o.nu && tail == o.tail));
  }
};

// Reduced confluent binomial rewrite system for the two-sided ideal spanned
// by the generators, under lex order with variable priority `prio`
// (prio[0] most significant). Binomial coefficients must be toric.
class RewriteSystem {
public:
  static RewriteSystem complete(const Field &F, const QMatrix &q, const std::vector<Laurent> &gens,
                                std::vector<std::size_t> prio = {});

  const QMatrix &q() const { return q_; }
  std::size_t n() const { return q_.n(); }
  const std::vector<std::size_t> &priority() const { return prio_; }
  const std::vector<Rule> &rules() const { return rules_; }
  bool greater(const Vec &a, const Vec &b) const;

  // Reduced form of c x^m: a monomial, or none when it reduces to 0.
  std::optional<Monomial> reduce(Monomial t) const;
  Laurent normal_form(const Laurent &f) const;

  std::string dump() const;

private:
  Field F_;
  QMatrix q_;
  std::vector<std::size_t> prio_;
  std::vector<Rule> rules_;
};

class AffineIdeal {
public:
  AffineIdeal(const Field &F, const QMatrix &q, const std::vector<Laurent> &gens = {});
  static AffineIdeal unit(const Field &F, const QMatrix &q);

  const Field &field() const { return F_; }
  const QMatrix &q() const { return sys_.q(); }
  std::size_t n() const { return sys_.n(); }
  const RewriteSystem &system() const { return sys_; }
  const std::vector<Rule> &rules() const { return sys_.rules(); }
  // One generator per rule, in rule order.
  std::vector<Laurent> generators() const;

  Laurent normal_form(const Laurent &f) const { return sys_.normal_form(f); }
  bool contains(const Laurent &f) const { return normal_form(f).is_zero(); }
  bool contains_monomial() const;
  bool is_unit() const;
  bool is_zero() const { return rules().empty(); }
  bool subset_of(const AffineIdeal &o) const;

  AffineIdeal operator+(const AffineIdeal &o) const;
  bool operator==(const AffineIdeal &o) const { return rules() == o.rules(); }
  bool operator!=(const AffineIdeal &o) const { return !(*this == o); }

  std::string str() const;

private:
  Field F_;
  RewriteSystem sys_;
};

Laurent monomial_of(const Field &F, const Vec &m);

// I cap A_q[keep]; the result lives on the kept variables in increasing order.
AffineIdeal eliminate(const AffineIdeal &I, std::vector<std::size_t> keep);
// Image under x_j -> 0 for j not kept.
AffineIdeal project(const AffineIdeal &I, std::vector<std::size_t> keep);
// Ideal of A_q generated by an ideal of A_q[keep], plus x_j (j not kept)
// when `with_killed` is set.
AffineIdeal lift(const AffineIdeal &I, const std::vector<std::size_t> &keep, const Field &F, const QMatrix &q,
                 bool with_killed);

// I(L, rho) cap A_q. With `certify`, checks x^{a+} - s x^{a-} membership for
// the lattice points a with |a_i| <= 2 max|basis entry|.
AffineIdeal contract_from_torus(const TorusContext &ctx, const TorusIdeal &I, bool certify = true);

struct XClosure {
  AffineIdeal closure;
  std::optional<TorusIdeal> character;
};
XClosure saturate_x(const AffineIdeal &I);
// (I : x_1...x_n) by adjoining an inverse of x_1...x_n and eliminating it.
AffineIdeal saturate_by_product(const AffineIdeal &I);

// (I + I2) cap (I + J_1) cap ... cap (I + J_m); each J_k lists monomial
// generators by exponent.
AffineIdeal intersect_special(const AffineIdeal &I, const AffineIdeal &I2, const std::vector<std::vector<Vec>> &monomial_ideals);
AffineIdeal radical_affine(const AffineIdeal &I);

struct AffinePrime {
  AffineIdeal ideal;
  std::vector<std::size_t> stratum;
  TorusContext stratum_ctx;
  TorusIdeal character;
};
// Strata are independent; `threads` > 1 spreads them over worker threads.
std::vector<AffinePrime> min_primes_affine(const AffineIdeal &I, unsigned threads = 1);

struct AffineClass {
  bool is_prime = false;
  bool is_completely_prime = false;
  bool is_primitive = false;
  std::vector<std::size_t> stratum;
  std::optional<TorusIdeal> character;
};
AffineClass classify_affine(const AffineIdeal &I);

struct CongruenceClasses {
  std::vector<std::vector<Vec>> classes; // nonzero classes, each sorted, ordered by first member
  std::vector<Vec> zero_class;
};
CongruenceClasses congruence_classes(const AffineIdeal &I, long degree_bound);

} // namespace qtb
