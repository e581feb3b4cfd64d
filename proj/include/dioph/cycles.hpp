#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dioph/forms.hpp"
#include "dioph/roots.hpp"

namespace dioph {

/// sigma_p with sigma_0 = 0. Defaults to (1/2) sum_{k<=p} H_k; individual
/// values can be overridden.
class SigmaTable {
 public:
  Rational operator()(int p) const;
  void set(int p, const Rational& value) { overrides_[p] = value; }
  bool is_standard() const { return overrides_.empty(); }
  static Rational standard(int p);

 private:
  std::map<int, Rational> overrides_;
};

enum class HeightConvention { Mahler, FubiniStudy };
std::string_view to_string(HeightConvention c);

struct WeightedPoint {
  ProjectivePoint point;
  int multiplicity = 1;
};

enum class ComponentKind { Ambient, ZeroCycle, Curve };

/// One Z-irreducible piece of a cycle. For 0-cycles the points are the
/// certified conjugates; `form` is the defining binary form in P^1, or for
/// intersection points in P^2 the eliminant factor in projected coordinates.
struct CycleComponent {
  ComponentKind kind = ComponentKind::ZeroCycle;
  std::optional<IntForm> form;
  std::vector<WeightedPoint> points;
  int multiplicity = 1;

  /// Degree of the reduced component.
  int degree() const;
};

class EffectiveCycle {
 public:
  EffectiveCycle() = default;
  EffectiveCycle(int t, int codim) : t_(t), codim_(codim) {}

  int t() const { return t_; }
  int codim() const { return codim_; }
  int dim() const { return t_ - codim_; }
  bool is_zero_cycle() const { return codim_ == t_; }
  bool empty() const { return components_.empty(); }
  const std::vector<CycleComponent>& components() const { return components_; }
  void add(CycleComponent c);

  int degree() const;
  /// Points with total multiplicities (0-cycles only).
  std::vector<WeightedPoint> points() const;
  EffectiveCycle scaled(int n) const;
  friend EffectiveCycle operator+(const EffectiveCycle& a, const EffectiveCycle& b);

  /// Literal form: points[...], div(...) or curve(...).
  std::string to_string() const;

 private:
  int t_ = 1;
  int codim_ = 1;
  std::vector<CycleComponent> components_;
};

EffectiveCycle ambient_cycle(int t);
/// Zero cycle of exact or analytic points; exact points in P^1 carry their
/// linear defining form.
EffectiveCycle point_cycle(const std::vector<WeightedPoint>& points);
/// div f in P^1: one component per irreducible factor over Z.
EffectiveCycle divisor_of(const IntForm& f, Precision p);
/// The plane curve g = 0 (not decomposed).
EffectiveCycle curve_of(const IntForm& g);

/// C . div f for a plane curve C = {g = 0}, with intersection multiplicities
/// read from the eliminant after a certified-generic linear projection.
EffectiveCycle intersect_with_divisor(const IntForm& g, const IntForm& f, Precision p);

/// "div(form)", "curve(form)", "points[(a:b)*m, ...]".
EffectiveCycle parse_cycle(std::string_view text, int t, Precision p);

/// h of a cycle over Z. Mahler: log M of the defining forms; exact points in
/// P^2 use the naive height; curves use log |g|_L2 + deg sigma_2 and P^t
/// uses sigma_t. FubiniStudy replaces log M by log N2 (product of the
/// Euclidean norms of the linear factors) and naive by Euclidean heights.
BallReal cycle_height(const EffectiveCycle& x, Precision p,
                      HeightConvention conv = HeightConvention::Mahler,
                      const SigmaTable& sigma = {});

/// |theta, X| = min over the support (0-cycles).
BallReal min_distance(const ProjectivePoint& theta, const EffectiveCycle& x, Precision p);

/// D_pt(theta, X) = sum n_x log |x, theta|.
BallReal algebraic_distance_points(const ProjectivePoint& theta, const EffectiveCycle& x,
                                   Precision p);

/// log |<f|theta>| + D sigma_{t-1} - h(div f).
BallReal algebraic_distance_divisor(const ProjectivePoint& theta, const IntForm& f,
                                    const SigmaTable& sigma, Precision p);

/// log of |f| at the unit representative of theta; -inf when f(theta) = 0
/// exactly.
BallReal log_abs_eval(const IntForm& f, const ProjectivePoint& theta, Precision p);
BallReal log_abs_eval(const RatForm& f, const ProjectivePoint& theta, Precision p);

/// Exact common factor test for binary forms.
bool share_factor(const IntForm& a, const IntForm& b);

}  // namespace dioph
