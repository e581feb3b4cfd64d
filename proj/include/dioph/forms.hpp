#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dioph/numerics.hpp"
#include "dioph/projective.hpp"

namespace dioph {

using Exponent = std::vector<int>;

/// Monomials of degree D in t+1 variables, ordered lexicographically with
/// the exponent of x0 descending. For t = 1 the index of x0^(D-i) x1^i is i.
class MonomialBasis {
 public:
  static const std::vector<Exponent>& list(int t, int D);
  static size_t count(int t, int D);
  static size_t index(const Exponent& e);
};

Integer binomial(long n, long k);
Integer factorial(long n);

/// Squared L2 norm of x^alpha on P^t: alpha! t! / (D+t)!.
Rational monomial_l2_weight(const Exponent& alpha);

/// Degree-D form in t+1 variables, stored densely over MonomialBasis.
template <class T>
class HomogeneousForm {
 public:
  HomogeneousForm() = default;
  HomogeneousForm(int t, int D, T zero = T())
      : t_(t), D_(D), c_(MonomialBasis::count(t, D), zero) {}
  HomogeneousForm(int t, int D, std::vector<T> coeffs) : t_(t), D_(D), c_(std::move(coeffs)) {
    if (c_.size() != MonomialBasis::count(t, D))
      fail(ErrorKind::DimensionMismatch, "coefficient count does not match (t, D)");
  }

  int t() const { return t_; }
  int degree() const { return D_; }
  size_t size() const { return c_.size(); }
  const std::vector<T>& coeffs() const { return c_; }
  std::vector<T>& coeffs() { return c_; }
  const T& operator[](size_t i) const { return c_[i]; }
  T& operator[](size_t i) { return c_[i]; }
  const T& at(const Exponent& e) const { return c_[MonomialBasis::index(e)]; }
  T& at(const Exponent& e) { return c_[MonomialBasis::index(e)]; }
  const std::vector<Exponent>& monomials() const { return MonomialBasis::list(t_, D_); }

  bool operator==(const HomogeneousForm& o) const {
    return t_ == o.t_ && D_ == o.D_ && c_ == o.c_;
  }

 private:
  int t_ = 1;
  int D_ = 0;
  std::vector<T> c_;
};

using IntForm = HomogeneousForm<Integer>;
using RatForm = HomogeneousForm<Rational>;
using BallForm = HomogeneousForm<ComplexBall>;

bool is_zero(const IntForm& f);
bool is_zero(const RatForm& f);
IntForm operator+(const IntForm& a, const IntForm& b);
IntForm operator-(const IntForm& a, const IntForm& b);
IntForm operator*(const IntForm& a, const IntForm& b);
IntForm operator*(const Integer& s, const IntForm& f);
RatForm operator+(const RatForm& a, const RatForm& b);
RatForm operator-(const RatForm& a, const RatForm& b);
RatForm operator*(const RatForm& a, const RatForm& b);
RatForm operator*(const Rational& s, const RatForm& f);

IntForm monomial_form(int t, const Exponent& e, const Integer& c = 1);
RatForm to_rational(const IntForm& f);
BallForm to_ball(const IntForm& f, Precision p);
BallForm to_ball(const RatForm& f, Precision p);
/// Clears denominators and returns the primitive integer multiple (sign kept).
IntForm primitive_multiple(const RatForm& f);

Integer content(const IntForm& f);
bool is_primitive(const IntForm& f);
/// f / content(f), normalized so the first nonzero coefficient is positive.
IntForm primitive_part(const IntForm& f);

/// Exact L2(P^t) inner product; monomials are orthogonal.
Rational l2_inner_product(const RatForm& f, const RatForm& g);
Rational l2_norm2(const IntForm& f);
Rational l2_norm2(const RatForm& f);
ComplexBall l2_inner_product(const BallForm& f, const BallForm& g);
/// log of the L2(P^t) norm.
BallReal log_l2_norm(const IntForm& f, Precision p);
BallReal log_l2_norm(const RatForm& f, Precision p);
BallReal log_l2_norm(const BallForm& f, Precision p);

/// f evaluated at a unit-norm representative of theta.
ComplexBall evaluate_at_unit(const IntForm& f, const ProjectivePoint& theta, Precision p);
ComplexBall evaluate_at_unit(const RatForm& f, const ProjectivePoint& theta, Precision p);
ComplexBall evaluate_at_unit(const BallForm& f, const ProjectivePoint& theta, Precision p);
/// f at the integer coordinates of an exact point (no normalization).
Integer evaluate_exact(const IntForm& f, const ProjectivePoint& x);
Rational evaluate_exact(const RatForm& f, const ProjectivePoint& x);
/// Values of all degree-D monomials at the unit representative of theta.
std::vector<ComplexBall> monomial_values(int t, int D, const ProjectivePoint& theta, Precision p);

/// For t = 1: coefficients of f(1, z), index i holds the z^i coefficient.
std::vector<Integer> dehomogenize(const IntForm& f);
IntForm homogenize(const std::vector<Integer>& p, int D);

/// Sparse text "D t; e0 ... et : coeff; ...". Integer forms round-trip.
std::string to_text(const IntForm& f);
IntForm parse_int_form(std::string_view text);
RatForm parse_rational_form(std::string_view text);
BallForm parse_ball_form(std::string_view text, Precision p);
/// Either the sparse format or a polynomial in x0..xt ("x1^2 - 2*x0^2").
/// t is required for the polynomial syntax.
IntForm parse_form(std::string_view text, int t);
/// Polynomial syntax, e.g. "x1^2 - 2*x0^2".
std::string to_polynomial_string(const IntForm& f);

}  // namespace dioph
