#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qtb {

using Vec = std::vector<std::int64_t>;
using Big = mpz_class;

Vec vec_add(const Vec &a, const Vec &b);
Vec vec_sub(const Vec &a, const Vec &b);
Vec vec_neg(const Vec &a);
Vec vec_scale(const Vec &a, std::int64_t k);
bool vec_is_zero(const Vec &a);
std::string vec_str(const Vec &a);

std::int64_t to_i64(const Big &x);

// Sublattice of Z^n stored by its row-style Hermite normal form: pivot
// columns strictly increase, pivots are positive, and the entries above a
// pivot lie in [0, pivot). Equal lattices therefore compare equal rowwise.
class Lattice {
public:
  explicit Lattice(std::size_t n = 0) : n_(n) {}

  static Lattice from_rows(const std::vector<Vec> &rows, std::size_t n);
  static Lattice full(std::size_t n);

  std::size_t dim() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec> &basis() const { return rows_; }
  const Vec &row(std::size_t i) const { return rows_[i]; }
  std::vector<std::size_t> pivots() const;

  std::optional<Vec> solve(const Vec &a) const;
  bool contains(const Vec &a) const { return solve(a).has_value(); }
  bool subset_of(const Lattice &other) const;
  Vec combine(const Vec &coeffs) const;
  Vec coset_rep(const Vec &a) const;

  // Index of the lattice in Z^n when it has full rank, otherwise 0.
  Big index() const;

  Lattice operator+(const Lattice &o) const;
  bool operator==(const Lattice &o) const { return n_ == o.n_ && rows_ == o.rows_; }
  bool operator!=(const Lattice &o) const { return !(*this == o); }

  std::string str() const;

private:
  std::size_t n_;
  std::vector<Vec> rows_;
};

enum class SatMode { full, p_part, prime_to_p };

Lattice saturate(const Lattice &L, const Lattice &ambient, SatMode mode = SatMode::full,
                 std::int64_t p = 0);

struct AdaptedBasis {
  std::vector<Vec> sup_basis;       // f_1..f_R, a basis of the larger lattice
  std::vector<std::int64_t> factors; // d_1 | d_2 | ... | d_r, r = rank of smaller
  std::size_t free_rank = 0;        // R - r
  Big torsion_order = 1;            // product of the d_i
};

// d_i f_i (i < r) is a basis of L_sub.
AdaptedBasis adapted_basis(const Lattice &L_sub, const Lattice &L_sup);

// Integer solutions of the system: rows of `eq` with modulus 0 must vanish
// exactly, rows with modulus m > 0 must vanish modulo m.
struct Congruence {
  std::vector<Big> coeffs;
  Big modulus = 0;
};
Lattice integer_kernel(const std::vector<Congruence> &eqs, std::size_t n);

// HNF of the row span of `rows` together with how each HNF row and each
// integer relation among the rows is written in terms of the input rows.
struct HnfTransform {
  std::vector<Vec> hnf;
  std::vector<std::vector<Big>> hnf_coeffs; // hnf[l] = sum_s hnf_coeffs[l][s] rows[s]
  std::vector<std::vector<Big>> relations;  // sum_s relations[k][s] rows[s] = 0, a basis
};
HnfTransform hnf_transform(const std::vector<Vec> &rows, std::size_t n);

// Solve x * B = a for x over Z where B has independent rows; none if no
// integral solution exists.
std::optional<Vec> solve_in_basis(const std::vector<Vec> &B, const Vec &a);

} // namespace qtb
