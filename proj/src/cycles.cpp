#include "dioph/cycles.hpp"

#include <algorithm>
#include <sstream>

#include "dioph/lattice.hpp"

namespace dioph {

Rational SigmaTable::standard(int p) {
  Rational sum = 0, harmonic = 0;
  for (int k = 1; k <= p; ++k) {
    harmonic += Rational(1, k);
    sum += harmonic;
  }
  Rational out = sum / 2;
  out.canonicalize();
  return out;
}

Rational SigmaTable::operator()(int p) const {
  if (p <= 0) return 0;
  auto it = overrides_.find(p);
  return it != overrides_.end() ? it->second : standard(p);
}

std::string_view to_string(HeightConvention c) {
  return c == HeightConvention::Mahler ? "mahler" : "fubini-study";
}

int CycleComponent::degree() const {
  switch (kind) {
    case ComponentKind::Ambient:
      return 1;
    case ComponentKind::Curve:
      return form ? form->degree() : 0;
    case ComponentKind::ZeroCycle: {
      int d = 0;
      for (const auto& wp : points) d += wp.multiplicity;
      return d;
    }
  }
  return 0;
}

void EffectiveCycle::add(CycleComponent c) {
  if (c.multiplicity < 1) fail(ErrorKind::DomainError, "multiplicities must be positive");
  components_.push_back(std::move(c));
}

int EffectiveCycle::degree() const {
  int d = 0;
  for (const auto& c : components_) d += c.multiplicity * c.degree();
  return d;
}

std::vector<WeightedPoint> EffectiveCycle::points() const {
  if (!is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "points() needs a 0-cycle");
  std::vector<WeightedPoint> out;
  for (const auto& c : components_)
    for (const auto& wp : c.points) out.push_back({wp.point, wp.multiplicity * c.multiplicity});
  return out;
}

EffectiveCycle EffectiveCycle::scaled(int n) const {
  if (n < 1) fail(ErrorKind::DomainError, "scale factor must be positive");
  EffectiveCycle out = *this;
  for (auto& c : out.components_) c.multiplicity *= n;
  return out;
}

EffectiveCycle operator+(const EffectiveCycle& a, const EffectiveCycle& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.t_ != b.t_ || a.codim_ != b.codim_)
    fail(ErrorKind::DimensionMismatch, "cycle sum needs equal ambient and codimension");
  EffectiveCycle out = a;
  for (const auto& c : b.components_) out.components_.push_back(c);
  return out;
}

std::string EffectiveCycle::to_string() const {
  std::ostringstream os;
  if (is_zero_cycle()) {
    os << "points[";
    bool first = true;
    for (const auto& c : components_)
      for (const auto& wp : c.points) {
        if (!first) os << ", ";
        first = false;
        os << wp.point.to_string();
        if (wp.multiplicity * c.multiplicity != 1) os << '*' << wp.multiplicity * c.multiplicity;
      }
    os << ']';
    return os.str();
  }
  bool first = true;
  for (const auto& c : components_) {
    if (!first) os << " + ";
    first = false;
    if (c.multiplicity != 1) os << c.multiplicity << '*';
    if (c.kind == ComponentKind::Ambient)
      os << "P^" << t_;
    else
      os << (t_ == 1 ? "div(" : "curve(") << (c.form ? to_polynomial_string(*c.form) : "?") << ')';
  }
  return os.str();
}

EffectiveCycle ambient_cycle(int t) {
  EffectiveCycle x(t, 0);
  CycleComponent c;
  c.kind = ComponentKind::Ambient;
  x.add(c);
  return x;
}

namespace {

IntForm linear_form_through(const ProjectivePoint& x) {
  const auto& c = x.integer_coords();
  IntForm f(1, 1, Integer(0));
  f[0] = -c[1];
  f[1] = c[0];
  return primitive_part(f);
}

}  // namespace

EffectiveCycle point_cycle(const std::vector<WeightedPoint>& points) {
  if (points.empty()) fail(ErrorKind::DomainError, "empty point list");
  const int t = points.front().point.dim();
  EffectiveCycle x(t, t);
  for (const auto& wp : points) {
    if (wp.point.dim() != t) fail(ErrorKind::DimensionMismatch, "points from different P^t");
    CycleComponent c;
    c.kind = ComponentKind::ZeroCycle;
    c.points = {{wp.point, 1}};
    c.multiplicity = wp.multiplicity;
    if (t == 1 && wp.point.is_exact()) c.form = linear_form_through(wp.point);
    x.add(std::move(c));
  }
  return x;
}

EffectiveCycle divisor_of(const IntForm& f, Precision p) {
  if (f.t() != 1) fail(ErrorKind::DimensionMismatch, "divisor_of works in P^1; use curve_of in P^2");
  if (is_zero(f)) fail(ErrorKind::DomainError, "div of the zero form");
  if (!is_primitive(f)) fail(ErrorKind::NonPrimitive, "form has content " + content(f).get_str());
  EffectiveCycle x(1, 1);
  for (const auto& fac : factor_binary_form(f, p)) {
    CycleComponent c;
    c.kind = ComponentKind::ZeroCycle;
    c.form = fac.form;
    c.multiplicity = fac.multiplicity;
    if (fac.form.degree() == 1) {
      for (auto& r : binary_form_roots(fac.form, p)) c.points.push_back({r.point, 1});
    } else {
      IntPoly q = poly_trim(dehomogenize(fac.form));
      for (const auto& z : isolate_roots(q, p)) {
        ComplexBall one(BallReal(1L, z.precision()));
        c.points.push_back({ProjectivePoint::analytic({one, z}), 1});
      }
    }
    x.add(std::move(c));
  }
  return x;
}

EffectiveCycle curve_of(const IntForm& g) {
  if (g.t() != 2) fail(ErrorKind::DimensionMismatch, "curves live in P^2");
  if (g.degree() < 1 || is_zero(g)) fail(ErrorKind::DomainError, "curve needs a nonconstant form");
  if (!is_primitive(g)) fail(ErrorKind::NonPrimitive, "form has content " + content(g).get_str());
  EffectiveCycle x(2, 1);
  CycleComponent c;
  c.kind = ComponentKind::Curve;
  c.form = g;
  x.add(std::move(c));
  return x;
}

namespace {

Integer eval_at(const IntForm& f, const std::vector<Integer>& x) {
  Integer s = 0;
  const auto& mons = f.monomials();
  for (size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0) continue;
    Integer term = f[k];
    for (size_t i = 0; i < x.size(); ++i)
      for (int e = 0; e < mons[k][i]; ++e) term *= x[i];
    s += term;
  }
  return s;
}

Rational eval_poly(const IntPoly& p, const Rational& z) {
  Rational acc = 0;
  for (size_t k = p.size(); k-- > 0;) acc = acc * z + Rational(p[k]);
  return acc;
}

// Projection centers (c0 : c1 : 1), small first.
std::vector<std::pair<int, int>> projection_centers() {
  std::vector<std::pair<int, int>> out;
  for (int r = 1; r <= 12; ++r)
    for (int a = -r; a <= r; ++a)
      for (int b : {r - std::abs(a), -(r - std::abs(a))}) {
        if (std::find(out.begin(), out.end(), std::make_pair(a, b)) == out.end())
          out.push_back({a, b});
      }
  // Lopsided centers avoid accidental symmetry with small curves.
  std::stable_partition(out.begin(), out.end(), [](const auto& c) { return c.first != c.second && c.first != -c.second; });
  return out;
}

struct Projected {
  EffectiveCycle cycle;
  std::vector<int> signature;  // sorted point multiplicities
};

std::optional<Projected> intersect_via(const IntForm& g, const IntForm& f, int c0, int c1,
                                       Precision p) {
  const int m = g.degree(), n = f.degree();
  // The shear k keeps points with x0 = 0 away from y0 = 0.
  const int k = c1 - c0 + 1;
  IntMatrix a{{1, k, c0}, {0, 1, c1}, {0, 0, 1}};
  IntForm G = substitute_linear(g, a), F = substitute_linear(f, a);
  IntForm r = eliminate_last_variable(G, F);
  if (is_zero(r)) fail(ErrorKind::ImproperIntersection, "the forms share a component");
  IntPoly rz = poly_trim(dehomogenize(r));
  if (poly_degree(rz) != m * n) return std::nullopt;  // intersection point over the center's line at infinity
  auto [s0, s1] = first_subresultant(G, F);
  auto lift = [&](const std::vector<ComplexBall>& y) {
    std::vector<ComplexBall> x{y[0] + y[1] * BallReal(static_cast<long>(k), p) +
                                   y[2] * BallReal(static_cast<long>(c0), p),
                               y[1] + y[2] * BallReal(static_cast<long>(c1), p), y[2]};
    return x;
  };
  Projected out{EffectiveCycle(2, 2), {}};
  for (const auto& part : squarefree_decomposition(rz)) {
    for (const auto& q : factor_squarefree(part.poly, p)) {
      CycleComponent c;
      c.kind = ComponentKind::ZeroCycle;
      c.form = homogenize(q, poly_degree(q));
      c.multiplicity = part.multiplicity;
      if (q.size() == 2) {
        Rational z(-q[0], q[1]);
        z.canonicalize();
        Rational den = eval_poly(s1, z);
        if (den == 0) return std::nullopt;
        Rational y2 = -eval_poly(s0, z) / den;
        std::vector<Rational> x{1 + k * z + c0 * y2, z + c1 * y2, y2};
        c.points.push_back({ProjectivePoint::exact(x), 1});
      } else {
        for (const auto& z : isolate_roots(q, p)) {
          ComplexBall den = poly_evaluate(s1, z);
          if (!den.is_nonzero()) return std::nullopt;
          ComplexBall y2 = -poly_evaluate(s0, z) / den;
          ComplexBall one(BallReal(1L, z.precision()));
          c.points.push_back({ProjectivePoint::analytic(lift({one, z, y2})), 1});
        }
      }
      for (size_t k = 0; k < c.points.size(); ++k) out.signature.push_back(part.multiplicity);
      out.cycle.add(std::move(c));
    }
  }
  std::sort(out.signature.begin(), out.signature.end());
  return out;
}

// Two lines meet in the cross product of their coefficient vectors.
EffectiveCycle intersect_lines(const IntForm& g, const IntForm& f) {
  auto coef = [](const IntForm& l) {
    return std::vector<Integer>{l.at({1, 0, 0}), l.at({0, 1, 0}), l.at({0, 0, 1})};
  };
  auto u = coef(g), v = coef(f);
  std::vector<Integer> x{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  if (x[0] == 0 && x[1] == 0 && x[2] == 0)
    fail(ErrorKind::ImproperIntersection, "the lines coincide");
  EffectiveCycle out(2, 2);
  CycleComponent c;
  c.kind = ComponentKind::ZeroCycle;
  c.points.push_back({ProjectivePoint::exact(x), 1});
  out.add(std::move(c));
  return out;
}

}  // namespace

EffectiveCycle intersect_with_divisor(const IntForm& g, const IntForm& f, Precision p) {
  if (g.t() != 2 || f.t() != 2) fail(ErrorKind::DimensionMismatch, "plane intersection needs ternary forms");
  if (is_zero(f)) fail(ErrorKind::ImproperIntersection, "f vanishes identically");
  if (!is_primitive(g)) fail(ErrorKind::NonPrimitive, "curve form has content " + content(g).get_str());
  if (f.degree() == 0) return EffectiveCycle(2, 2);
  if (g.degree() == 1 && f.degree() == 1) return intersect_lines(g, f);
  std::optional<Projected> first;
  for (const auto& [c0, c1] : projection_centers()) {
    std::vector<Integer> center{c0, c1, 1};
    if (eval_at(g, center) == 0 || eval_at(f, center) == 0) continue;
    auto cur = intersect_via(g, f, c0, c1, p);
    if (!cur) continue;
    if (!first) {
      first = std::move(cur);
      continue;
    }
    // A second projection confirms that no two points were merged.
    if (cur->signature == first->signature) return first->cycle;
    first = std::move(cur);
  }
  fail(ErrorKind::PrecisionExhausted, "no generic projection found for the intersection");
}

namespace {

std::string trim(std::string_view s) {
  size_t a = s.find_first_not_of(" \t\n"), b = s.find_last_not_of(" \t\n");
  return a == std::string_view::npos ? std::string() : std::string(s.substr(a, b - a + 1));
}

}  // namespace

EffectiveCycle parse_cycle(std::string_view text0, int t, Precision p) {
  std::string text = trim(text0);
  auto body = [&](std::string_view prefix, char open, char close) -> std::optional<std::string> {
    if (text.rfind(prefix, 0) != 0) return std::nullopt;
    std::string rest = trim(std::string_view(text).substr(prefix.size()));
    if (rest.size() < 2 || rest.front() != open || rest.back() != close)
      fail(ErrorKind::ParseError, "malformed cycle literal: " + text);
    return rest.substr(1, rest.size() - 2);
  };
  if (auto b = body("div", '(', ')')) {
    IntForm f = parse_form(*b, t);
    return t == 1 ? divisor_of(f, p) : curve_of(f);
  }
  if (auto b = body("curve", '(', ')')) return curve_of(parse_form(*b, 2));
  if (auto b = body("points", '[', ']')) {
    std::vector<WeightedPoint> pts;
    std::string s = *b;
    size_t i = 0;
    while (i < s.size()) {
      size_t open = s.find('(', i);
      if (open == std::string::npos) break;
      int depth = 0;
      size_t close = open;
      for (; close < s.size(); ++close) {
        if (s[close] == '(') ++depth;
        if (s[close] == ')' && --depth == 0) break;
      }
      if (close >= s.size()) fail(ErrorKind::ParseError, "unbalanced parentheses in " + text);
      PointSpec spec = PointSpec::parse(s.substr(open, close - open + 1));
      size_t next = s.find(',', close);
      std::string tail = trim(std::string_view(s).substr(close + 1, (next == std::string::npos ? s.size() : next) - close - 1));
      int mult = 1;
      if (!tail.empty()) {
        if (tail.front() != '*') fail(ErrorKind::ParseError, "expected *multiplicity in " + text);
        try {
          mult = std::stoi(tail.substr(1));
        } catch (const std::exception&) {
          fail(ErrorKind::ParseError, "bad multiplicity in " + text);
        }
      }
      pts.push_back({spec.at(p), mult});
      i = next == std::string::npos ? s.size() : next + 1;
    }
    EffectiveCycle x = point_cycle(pts);
    if (x.t() != t) fail(ErrorKind::DimensionMismatch, "points do not live in P^" + std::to_string(t));
    return x;
  }
  fail(ErrorKind::ParseError, "unknown cycle literal: " + text);
}

namespace {

BallReal component_height(const CycleComponent& c, int t, Precision p, HeightConvention conv,
                          const SigmaTable& sigma) {
  const bool fs = conv == HeightConvention::FubiniStudy;
  switch (c.kind) {
    case ComponentKind::Ambient:
      return BallReal(sigma(t), p);
    case ComponentKind::Curve:
      return log_l2_norm(*c.form, p) + BallReal(sigma(2) * c.form->degree(), p);
    case ComponentKind::ZeroCycle:
      if (c.form) return fs ? log_root_norm(*c.form, p) : log_mahler_measure(*c.form, p);
      if (c.points.size() == 1 && c.points.front().point.is_exact())
        return fs ? fs_height(c.points.front().point, p) : naive_height(c.points.front().point, p);
      fail(ErrorKind::UnsupportedCycle, "height of a point cluster without a defining form");
  }
  return BallReal(0L, p);
}

}  // namespace

BallReal cycle_height(const EffectiveCycle& x, Precision p, HeightConvention conv,
                      const SigmaTable& sigma) {
  BallReal h(0L, p);
  for (const auto& c : x.components())
    h += component_height(c, x.t(), p, conv, sigma) * BallReal(static_cast<long>(c.multiplicity), p);
  return h;
}

BallReal min_distance(const ProjectivePoint& theta, const EffectiveCycle& x, Precision p) {
  auto pts = x.points();
  if (pts.empty()) fail(ErrorKind::DomainError, "distance to the empty cycle");
  std::optional<BallReal> best;
  for (const auto& wp : pts) {
    BallReal d = fs_distance(theta, wp.point, p);
    best = best ? min(*best, d) : d;
  }
  return *best;
}

BallReal algebraic_distance_points(const ProjectivePoint& theta, const EffectiveCycle& x,
                                   Precision p) {
  if (!x.is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "D_pt needs a 0-cycle");
  BallReal acc(0L, p);
  for (const auto& wp : x.points()) {
    BallReal d = fs_distance(theta, wp.point, p);
    BallReal term = d.is_exact_zero() ? BallReal::neg_infinity(p) : log_abs(ComplexBall(d));
    acc += term * BallReal(static_cast<long>(wp.multiplicity), p);
  }
  return acc;
}

BallReal log_abs_eval(const IntForm& f, const ProjectivePoint& theta, Precision p) {
  return log_abs(evaluate_at_unit(f, theta, p));
}

BallReal log_abs_eval(const RatForm& f, const ProjectivePoint& theta, Precision p) {
  return log_abs(evaluate_at_unit(f, theta, p));
}

BallReal algebraic_distance_divisor(const ProjectivePoint& theta, const IntForm& f,
                                    const SigmaTable& sigma, Precision p) {
  if (!is_primitive(f)) fail(ErrorKind::NonPrimitive, "form has content " + content(f).get_str());
  const int t = f.t();
  BallReal h = t == 1 ? log_mahler_measure(f, p) : cycle_height(curve_of(f), p, HeightConvention::Mahler, sigma);
  BallReal sig(sigma(t - 1) * f.degree(), p);
  return log_abs_eval(f, theta, p) + sig - h;
}

bool share_factor(const IntForm& a, const IntForm& b) {
  if (a.t() != 1 || b.t() != 1) fail(ErrorKind::DimensionMismatch, "share_factor expects binary forms");
  IntPoly pa = poly_trim(dehomogenize(a)), pb = poly_trim(dehomogenize(b));
  if (pa.empty() || pb.empty()) return true;
  const bool inf_a = poly_degree(pa) < a.degree(), inf_b = poly_degree(pb) < b.degree();
  if (inf_a && inf_b) return true;
  return poly_degree(poly_gcd(pa, pb)) > 0;
}

}  // namespace dioph
