#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dioph/cycles.hpp"
#include "json.hpp"

namespace dioph {

enum class Verdict { Holds, Violated, Indeterminate };
std::string_view to_string(Verdict v);
/// Violated dominates Indeterminate, which dominates Holds.
Verdict worst(Verdict a, Verdict b);

/// lhs <= rhs, judged on slack = rhs - lhs.
struct Inequality {
  std::string label;
  BallReal lhs;
  BallReal rhs;
  BallReal slack;
  Verdict verdict = Verdict::Indeterminate;
};

/// A lhs of NEG_INFINITY always holds. The slack may be supplied when a
/// tighter enclosure than rhs - lhs is available.
Inequality make_inequality(std::string label, const BallReal& lhs, const BallReal& rhs,
                           std::optional<BallReal> slack = std::nullopt);
/// Verdict decided exactly elsewhere; the balls are only reported.
Inequality exact_inequality(std::string label, const BallReal& lhs, const BallReal& rhs,
                            const BallReal& slack, bool holds);

using NamedValues = std::vector<std::pair<std::string, std::string>>;

struct DistanceReport {
  std::string check;
  BallReal lhs;
  BallReal rhs;
  BallReal slack;
  Verdict verdict = Verdict::Indeterminate;
  std::vector<Inequality> parts;
  NamedValues constants;
  NamedValues notes;
  /// Smallest value of the fitted constant that makes the main inequality
  /// hold on this instance, when the checker has one.
  std::optional<BallReal> required_constant;

  void add(Inequality q);
  nlohmann::json to_json() const;
};

nlohmann::json ball_json(const BallReal& x);
/// Upper endpoint of a required constant rounded up to a multiple of 2^-40.
Rational fit_constant(const BallReal& required);
std::string rational_text(const Rational& q);

/// deg X log |theta,X| <= D_pt + c deg X <= log |theta,X| + c' deg X.
DistanceReport check_bezout1(const ProjectivePoint& theta, const EffectiveCycle& x,
                             const Rational& c, const Rational& c_prime, Precision p);

struct MetricBezoutConstants {
  /// d-bar-prime of the closest-cycle inequality.
  Rational dbar_prime = 0;
  /// d of the far-subset inequality.
  Rational d = 0;
  SigmaTable sigma;
};

/// First-order stand-in for the distance from theta to the curve g = 0:
/// |g(theta)| / |grad g(theta)| at the unit representative, capped at 1.
BallReal curve_distance_surrogate(const IntForm& g, const ProjectivePoint& theta, Precision p);

/// The closest-cycle inequality: with Z = div f_Y^perp, compares |Z,theta|
/// and |Y,theta| and evaluates
///   D(theta, Y.Z) <= B + 2 D h(Y) + deg Y log |f_Y^perp|_L2 + dbar' deg Y deg Z
/// with B = D(theta, Y) when Z is at least as close, else log |<f_Y^perp|theta>|.
/// Y is a 0-cycle of P^1 given by forms, or a plane curve.
DistanceReport check_metric_bezout(const ProjectivePoint& theta, const EffectiveCycle& y,
                                   const IntForm& f, const MetricBezoutConstants& k, Precision p);

/// Far-subset inequality for a 0-cycle Y of P^1:
///   D(Y.Z, theta) + D(Y, Z) <= sum_{y in M} n_y log |y,theta| + d deg X deg Y
/// with X = div f, M = {y : |Z,theta| <= |y,theta|}, and
/// D(y, Z) = log |F(y)| - log N2(F) + D/2 for F spanning Z.
DistanceReport check_bezmult(const ProjectivePoint& theta, const EffectiveCycle& y,
                             const IntForm& f, const MetricBezoutConstants& k, Precision p);

/// A point of P^1 algebraic over Q with its minimal form.
struct AlgebraicPoint {
  IntForm form;
  ProjectivePoint point;

  int degree() const { return form.degree(); }
  static AlgebraicPoint rational(const ProjectivePoint& x);
  /// All roots of all irreducible factors of f.
  static std::vector<AlgebraicPoint> roots_of(const IntForm& f, Precision p);
};

struct LiouvilleResult {
  std::vector<DistanceReport> reports;
  BallReal c1;
  BallReal c2;
  size_t holds = 0, violated = 0, indeterminate = 0;
};

/// log |alpha,beta| >= -c1 deg beta - c2 h(beta) with
/// c1 = (c + c') deg alpha + h(alpha), c2 = deg alpha. Pairs of rational
/// points are decided in exact integer arithmetic when c + c' = 0.
LiouvilleResult check_liouville(const AlgebraicPoint& alpha, const std::vector<AlgebraicPoint>& betas,
                                HeightConvention conv, const Rational& c, const Rational& c_prime,
                                Precision p);

struct HilbertReport {
  long value = 0;
  long upper_bound = 0;
  std::optional<long> lower_bound;
  /// D-bar of the complete-intersection bound when it applies.
  std::optional<long> dbar;
  bool within_bounds = false;
};

/// dim H^0(X, O(D)) = C(D+t, t) - dim I_X(D), for P^t, exact point sets,
/// forms-defined 0-cycles of P^1 and plane curves.
HilbertReport hilbert_function(const EffectiveCycle& x, int D);

struct ArithmeticHilbertConstants {
  Rational c1 = 1, c2 = 1, c3 = 1, c4 = 1, c5 = 1;
  long m = 2;
  SigmaTable sigma;
};

struct ArithmeticHilbertReport {
  BallReal value;
  size_t rank = 0;
  std::vector<Inequality> bounds;
};

/// -(1/2) log det of the Gram of the projected lattice q(Gamma(O(D))_Z) in
/// I_X(D)^perp, with the shape bounds evaluated for the given constants.
ArithmeticHilbertReport arithmetic_hilbert(const EffectiveCycle& x, int D,
                                           const ArithmeticHilbertConstants& k, Precision p);

/// Random t = 1 instance for the metric Bezout checks: Y = div g and f with
/// no common factor and f not in I_Y(D).
struct BezoutInstance {
  ProjectivePoint theta;
  IntForm g;
  IntForm f;
};
BezoutInstance random_bezout_instance(std::mt19937_64& rng);

struct CalibrationSummary {
  std::string check;
  Rational fitted;
  size_t train = 0;
  size_t holdout = 0;
  size_t holds = 0, violated = 0, indeterminate = 0, resolved_by_precision = 0;
  std::vector<DistanceReport> holdout_reports;
};

/// Fits the smallest constant making every training instance hold and
/// re-checks held-out instances with it, doubling precision on indeterminate
/// comparisons (up to the cap in the policy).
std::pair<CalibrationSummary, CalibrationSummary> calibrate_metric_bezout(
    uint64_t seed, size_t n_train, size_t n_holdout, const PrecisionPolicy& policy);

}  // namespace dioph
