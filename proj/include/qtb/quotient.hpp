#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qtb/affine.hpp"

namespace qtb {

// Finite-dimensional algebra by structure constants on a basis e_0..e_{d-1}.
struct FinDimAlgebra {
  Field F;
  std::size_t dim = 0;
  // mult[i * dim + j]: e_i e_j as a sparse combination of basis vectors
  std::vector<std::vector<std::pair<std::size_t, FieldElem>>> mult;

  const std::vector<std::pair<std::size_t, FieldElem>> &product(std::size_t i, std::size_t j) const {
    return mult[i * dim + j];
  }
};

struct OracleReport {
  std::size_t jacobson_radical_dim = 0;
  std::size_t center_dim = 0;
  bool is_semiprime = false;
  bool is_prime = false;
};

// Radical by the trace form in characteristic 0 and by the
// Cohen-Ivanyos-Wales iteration over F_p otherwise. Prime means prime after
// extending to an algebraic closure: semiprime with one-dimensional center.
OracleReport findim_oracle(const FinDimAlgebra &A, std::size_t bound = 512);

// T_q / I(L, rho) on the basis of canonical coset representatives.
class TwistedGroupAlgebra {
public:
  TwistedGroupAlgebra(const TorusContext &ctx, const TorusIdeal &I);

  const std::vector<std::int64_t> &torsion() const { return torsion_; } // invariant factors > 1
  std::size_t free_rank() const { return free_rank_; }
  bool finite() const { return free_rank_ == 0; }
  Big order() const; // 0 when infinite

  Vec rep(const Vec &gamma) const { return I_.lattice().coset_rep(gamma); }
  // x_[s] x_[t] = coef x_[g]; returns (coef, g) for representatives s, t.
  std::pair<Scalar, Vec> product(const Vec &s, const Vec &t) const;
  std::vector<Vec> basis() const; // sorted; finite case only
  FinDimAlgebra algebra(std::size_t bound = 512) const;
  std::string table(std::size_t bound = 512) const;

private:
  TorusContext ctx_;
  TorusIdeal I_;
  std::vector<std::int64_t> torsion_;
  std::size_t free_rank_ = 0;
};

// G = Z/orders[0] x ... with 0 meaning Z; elements in reduced coordinates
// (torsion coordinates in [0, order)).
struct AbelianGroup {
  std::vector<std::int64_t> orders;
  Vec reduce(const Vec &g) const;
  std::size_t rank() const { return orders.size(); }
};
using Cocycle = std::function<Scalar(const Vec &, const Vec &)>;

struct CocyclePresentation {
  QMatrix q;
  TorusIdeal J;
};
// The pair (q, J) with T_q / J isomorphic to the twisted group algebra K^e G,
// x_i mapping to the basis element of the i-th standard generator.
CocyclePresentation from_group_cocycle(const Field &F, const AbelianGroup &G, const Cocycle &e);

// Kernel B of x_i -> y_{s_i} into the twisted semigroup algebra on the monoid
// generated by S, with the letters q-commuting as given. Without a target the
// y_s are normalized so that x^b -> 1 on the HNF rows b of the relation
// lattice. With a target (a k x k matrix on the ambient Z^k), y_s is the
// monomial y^s of that quantum torus and q must be its pullback to S.
AffineIdeal toric_presentation(const Field &F, const std::vector<Vec> &S, const QMatrix &q,
                               const QMatrix *target = nullptr);

struct QhatPresentation {
  QMatrix qhat;
  std::vector<Laurent> generators; // x_i x_{i+n} - 1
};
QhatPresentation qhat_presentation(const Field &F, const QMatrix &q);

} // namespace qtb
