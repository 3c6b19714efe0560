#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "alab/matrix.hpp"

namespace alab {

// ---------------------------------------------------------------------------
// Integer normal forms
// ---------------------------------------------------------------------------

/// U * A * V = D with U, V unimodular; D diagonal with d1 | d2 | ... | dk > 0
/// followed by zeros. Vinv is V^{-1}, kept because cokernel coordinates need it.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix Vinv;
  IntVector invariant_factors;

  std::size_t rank() const noexcept { return invariant_factors.size(); }
};

SmithForm smith_normal_form(const IntMatrix& A);

/// Row-style Hermite form: U * A = H, H echelon with positive pivots and the
/// entries above each pivot reduced into [0, pivot). Zero rows come last.
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

HermiteForm hermite_normal_form(const IntMatrix& A);

/// Integer solutions of A x = b: x = particular + Z-span(homogeneous).
struct SolutionSet {
  IntVector particular;
  std::vector<IntVector> homogeneous;
};

/// Evidence that A x = b has no integer solution: combination . A equals
/// modulus * reduced_row, while combination . b = value is not a multiple of
/// modulus (modulus == 0 means combination . A vanishes and value != 0).
struct SolveObstruction {
  std::size_t row = 0;
  Integer modulus;
  Integer value;
  IntVector combination;
  IntVector reduced_row;
};

using SolveResult = std::variant<SolutionSet, SolveObstruction>;

SolveResult solve_integer_system(const IntMatrix& A, std::span<const Integer> b);

/// Independent re-check of an obstruction against (A, b).
bool check_obstruction(const IntMatrix& A, std::span<const Integer> b, const SolveObstruction& o);

// ---------------------------------------------------------------------------
// Row lattices in Z^n
// ---------------------------------------------------------------------------

/// Canonical basis (nonzero HNF rows) of the lattice spanned by `rows`.
IntMatrix lattice_basis(const IntMatrix& rows);
IntMatrix lattice_basis(const std::vector<IntVector>& rows, std::size_t dim);

/// Membership in the lattice with the given HNF basis.
bool in_lattice(const IntMatrix& hnf_basis, std::span<const Integer> v);

/// Coefficients c with c . basis = v for an HNF basis, if v is in the lattice.
std::optional<IntVector> lattice_coordinates(const IntMatrix& hnf_basis, std::span<const Integer> v);

/// Basis of {y in Z^m : y A = 0}.
std::vector<IntVector> integer_left_kernel(const IntMatrix& A);

/// HNF basis of rowspace(B1) intersected with rowspace(B2).
IntMatrix lattice_intersection(const IntMatrix& B1, const IntMatrix& B2);

/// HNF basis of (Q L) intersected with Z^n, the saturation of L.
IntMatrix lattice_saturation(const IntMatrix& rows);

/// Determinant by fraction-free elimination (square input).
Integer determinant(const IntMatrix& A);

// ---------------------------------------------------------------------------
// Rational linear algebra
// ---------------------------------------------------------------------------

struct RowEchelon {
  RatMatrix R;  // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;
};

RowEchelon rref(const RatMatrix& A);
std::size_t rank(const RatMatrix& A);
std::size_t rank(const IntMatrix& A);
/// Basis of {y : y A = 0} over Q.
std::vector<RatVector> left_kernel(const RatMatrix& A);
/// Some y with y A = b, if one exists.
std::optional<RatVector> solve_left(const RatMatrix& A, std::span<const Rational> b);
/// Rank over the field with p elements (A must be p-integral).
std::size_t rank_mod_p(const RatMatrix& A, const Integer& p);
/// Left kernel over F_p, vectors with entries in [0, p).
std::vector<IntVector> left_kernel_mod_p(const RatMatrix& A, const Integer& p);

/// True when the row spaces of A and B over Q coincide.
bool same_row_space(const RatMatrix& A, const RatMatrix& B);

/// Least common multiple of all denominators.
Integer common_denominator(const RatMatrix& A);
Integer common_denominator(std::span<const Rational> v);

}  // namespace alab
