#pragma once

#include <vector>

#include "dioph/forms.hpp"
#include "dioph/linalg.hpp"

namespace dioph {

/// Univariate integer polynomial, index i holds the z^i coefficient. Kept
/// trimmed (no zero leading coefficient); the zero polynomial is empty.
using IntPoly = std::vector<Integer>;

IntPoly poly_trim(IntPoly p);
int poly_degree(const IntPoly& p);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_derivative(const IntPoly& p);
Integer poly_content(const IntPoly& p);
/// p / content(p) with positive leading coefficient.
IntPoly poly_primitive(const IntPoly& p);
/// Primitive gcd over Z.
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);
/// Exact division over Z; false when d does not divide a.
bool poly_divides(const IntPoly& d, const IntPoly& a, IntPoly* quotient = nullptr);
ComplexBall poly_evaluate(const IntPoly& p, const ComplexBall& z);

struct SquarefreePart {
  IntPoly poly;
  int multiplicity = 1;
};
/// Yun's algorithm on the primitive part; parts of degree 0 are omitted.
std::vector<SquarefreePart> squarefree_decomposition(const IntPoly& p);

/// Complex balls, one per root of a squarefree polynomial, pairwise disjoint
/// and each certified to contain exactly one root (Gershgorin disks of the
/// Weierstrass matrix). Precision is doubled from p as needed.
std::vector<ComplexBall> isolate_roots(const IntPoly& p, Precision p0);

/// Irreducible factors over Z of a squarefree primitive polynomial, found by
/// recombining certified roots into integer candidates and trial division.
std::vector<IntPoly> factor_squarefree(const IntPoly& p, Precision p0);

/// log of the Mahler measure |lc| prod max(1, |r|).
BallReal log_mahler_measure(const IntPoly& p, Precision p0);

struct FormFactor {
  IntForm form;
  int multiplicity = 1;
};
/// Irreducible primitive factors of a binary form over Z (x0 included when
/// (0:1) is a root). The content is dropped.
std::vector<FormFactor> factor_binary_form(const IntForm& f, Precision p);

struct FormRoot {
  ProjectivePoint point;
  int multiplicity = 1;
};
/// Roots in P^1 with multiplicity; linear factors give exact points.
std::vector<FormRoot> binary_form_roots(const IntForm& f, Precision p);

/// log M(f) of a binary form (roots at infinity contribute nothing).
BallReal log_mahler_measure(const IntForm& f, Precision p);
/// log N2(f) = log |lc| + sum (1/2) log(1 + |r|^2): the product of the
/// Euclidean norms of the linear factors. D_pt-compatible height.
BallReal log_root_norm(const IntForm& f, Precision p);

/// Sylvester resultant via fraction-free elimination.
Integer resultant(const IntPoly& a, const IntPoly& b);

/// f(A x) for a (t+1) x (t+1) integer matrix A.
IntForm substitute_linear(const IntForm& f, const IntMatrix& a);

/// For ternary forms whose x2-leading coefficients are nonzero constants:
/// Res_{x2}(g, f) as a binary form of degree deg g * deg f.
IntForm eliminate_last_variable(const IntForm& g, const IntForm& f);

/// First subresultant S1 = s1 x2 + s0 of two ternary forms with respect to
/// x2, dehomogenized at x0 = 1: returns (s0(1, z), s1(1, z)).
std::pair<IntPoly, IntPoly> first_subresultant(const IntForm& g, const IntForm& f);

}  // namespace dioph
