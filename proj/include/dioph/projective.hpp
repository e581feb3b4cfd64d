#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

/// A point of P^t. The exact variant holds coprime integer coordinates with
/// the first nonzero coordinate positive; the analytic variant holds complex
/// balls normalized to Euclidean norm 1 up to the ball radii.
class ProjectivePoint {
 public:
  static ProjectivePoint exact(const std::vector<Rational>& coords);
  static ProjectivePoint exact(const std::vector<Integer>& coords);
  static ProjectivePoint analytic(const std::vector<ComplexBall>& coords);

  int dim() const { return static_cast<int>(size()) - 1; }
  size_t size() const { return exact_ ? ints_.size() : balls_.size(); }
  bool is_exact() const { return exact_; }
  const std::vector<Integer>& integer_coords() const;
  /// Coordinates as balls at precision p (exact points are converted, analytic
  /// points are returned as stored).
  std::vector<ComplexBall> ball_coords(Precision p) const;
  Precision precision() const;

  bool operator==(const ProjectivePoint& o) const;

  std::string to_string() const;

 private:
  bool exact_ = true;
  std::vector<Integer> ints_;
  std::vector<ComplexBall> balls_;
};

/// Chordal Fubini-Study distance |x,y| = |x ^ y| / (|x| |y|), in [0, 1].
BallReal fs_distance(const ProjectivePoint& x, const ProjectivePoint& y, Precision p);

/// log max |x_i| on the coprime integer representative.
BallReal naive_height(const ProjectivePoint& x, Precision p);

/// log of the Euclidean norm of the coprime integer representative.
BallReal fs_height(const ProjectivePoint& x, Precision p);

std::vector<ComplexBall> unit_representative(const ProjectivePoint& x, Precision p);

/// "(a:b:...:c)" with integer or rational entries.
ProjectivePoint parse_exact_point(std::string_view text);

/// A point given by coordinate expressions, re-evaluable at any precision.
/// Expressions use integers, decimals, fractions, e, pi, i, sqrt(.), log(.),
/// exp(.), liouville, + - * / ^ and parentheses.
class PointSpec {
 public:
  explicit PointSpec(std::vector<std::string> exprs);
  /// "(e1:e2:...)".
  static PointSpec parse(std::string_view text);
  static PointSpec from_point(const ProjectivePoint& x);

  int dim() const { return static_cast<int>(exprs_.size()) - 1; }
  /// True when every coordinate is a rational number.
  bool is_exact() const { return exact_.has_value(); }
  ProjectivePoint at(Precision p) const;
  const std::vector<std::string>& expressions() const { return exprs_; }
  std::string to_string() const;

 private:
  std::vector<std::string> exprs_;
  std::optional<ProjectivePoint> exact_;
};

/// Evaluates one coordinate expression. Returns the exact rational value when
/// the expression is rational, and otherwise a complex ball at precision p.
struct ExprValue {
  std::optional<Rational> exact;
  ComplexBall ball;
};
ExprValue evaluate_expression(std::string_view expr, Precision p);

}  // namespace dioph
