#pragma once

#include <string>
#include <vector>

#include "qtb/torus.hpp"

namespace qtb {

// Either the whole ring or I(L, rho) with rho given on the HNF rows of L.
class TorusIdeal {
public:
  static TorusIdeal unit(std::size_t n);
  // Checks L in Gamma_Z and nonzero values of the right count.
  static TorusIdeal make(const TorusContext &ctx, const Lattice &L, const std::vector<Scalar> &rho);

  bool is_unit() const { return unit_; }
  const Lattice &lattice() const { return L_; }
  const std::vector<Scalar> &rho() const { return rho_; }
  Scalar rho_at(const Vec &a) const; // a in L

  bool operator==(const TorusIdeal &o) const;
  bool operator!=(const TorusIdeal &o) const { return !(*this == o); }
  std::string str() const;

private:
  bool unit_ = false;
  Lattice L_;
  std::vector<Scalar> rho_;
};

// Each generator is a Laurent polynomial with at most two terms.
TorusIdeal from_generators(const TorusContext &ctx, const std::vector<Laurent> &gens);

Laurent normal_form(const TorusContext &ctx, const TorusIdeal &I, const Laurent &f);
bool contains(const TorusContext &ctx, const TorusIdeal &I, const Laurent &f);

TorusIdeal radical(const TorusContext &ctx, const TorusIdeal &I);
std::vector<TorusIdeal> min_assoc_primes(const TorusContext &ctx, const TorusIdeal &I);

struct TorusClass {
  bool is_prime = false;
  bool is_completely_prime = false;
  bool is_maximal = false;
  bool is_primitive = false;
  std::size_t height = 0;
};
TorusClass classify(const TorusContext &ctx, const TorusIdeal &I);

// x^{b_l} - c(b_l)^{-1} rho(b_l) over the HNF rows b_l of L.
std::vector<Laurent> regular_generators(const TorusContext &ctx, const TorusIdeal &I);

// The scalar nu with x^a - nu in I(L, rho), a in L.
Scalar binomial_value(const TorusContext &ctx, const TorusIdeal &I, const Vec &a);

// All characters on L_sup extending (L_sub, rho), in lexicographic order of
// root indices over the adapted basis. Exactly one when the index is a power
// of the characteristic.
std::vector<std::vector<Scalar>> extend_character(const TorusContext &ctx, const Lattice &L_sub,
                                                  const std::vector<Scalar> &rho, const Lattice &L_sup);

} // namespace qtb
