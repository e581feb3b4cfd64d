#pragma once

#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(RatMatrix& m);
size_t rank(RatMatrix m);
/// Basis of {x : m x = 0}, one vector per free column.
std::vector<RatVector> kernel(RatMatrix m, size_t cols);
Rational determinant(RatMatrix m);
/// Fraction-free determinant.
Integer bareiss_determinant(IntMatrix m);
/// Solves m x = b for square nonsingular m.
RatVector solve(RatMatrix m, RatVector b);

/// Row Hermite normal form: returns (H, U) with U unimodular and U A = H.
/// The nonzero rows of H come first and form a basis of the row lattice.
struct HermiteResult {
  IntMatrix h;
  IntMatrix u;
  size_t rank = 0;
};
HermiteResult hermite_rows(const IntMatrix& a);

IntMatrix identity_matrix(size_t n);

}  // namespace dioph
