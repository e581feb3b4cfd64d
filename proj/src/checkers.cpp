#include "dioph/checkers.hpp"

#include <algorithm>

#include "dioph/lattice.hpp"
#include "dioph/sections.hpp"

namespace dioph {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "HOLDS";
    case Verdict::Violated:
      return "VIOLATED";
    case Verdict::Indeterminate:
      return "INDETERMINATE";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::Violated || b == Verdict::Violated) return Verdict::Violated;
  if (a == Verdict::Indeterminate || b == Verdict::Indeterminate) return Verdict::Indeterminate;
  return Verdict::Holds;
}

namespace {

BallReal pos_infinity(Precision p) { return -BallReal::neg_infinity(p); }

BallReal clamp_nonneg(const BallReal& x) { return max(x, BallReal(0L, x.precision())); }
BallReal clamp_nonpos(const BallReal& x) { return min(x, BallReal(0L, x.precision())); }

BallReal ball(const Rational& q, Precision p) { return BallReal(q, p); }

}  // namespace

Inequality make_inequality(std::string label, const BallReal& lhs, const BallReal& rhs,
                           std::optional<BallReal> slack) {
  Inequality q{std::move(label), lhs, rhs, BallReal(0L, lhs.precision()), Verdict::Indeterminate};
  if (lhs.is_neg_infinity()) {
    q.slack = rhs.is_neg_infinity() ? BallReal(0L, lhs.precision()) : pos_infinity(lhs.precision());
    q.verdict = Verdict::Holds;
    return q;
  }
  if (rhs.is_neg_infinity()) {
    q.slack = BallReal::neg_infinity(lhs.precision());
    q.verdict = lhs.is_finite() ? Verdict::Violated : Verdict::Indeterminate;
    return q;
  }
  q.slack = slack ? *slack : rhs - lhs;
  if (q.slack.is_nonnegative())
    q.verdict = Verdict::Holds;
  else if (q.slack.is_negative())
    q.verdict = Verdict::Violated;
  return q;
}

Inequality exact_inequality(std::string label, const BallReal& lhs, const BallReal& rhs,
                            const BallReal& slack, bool holds) {
  return {std::move(label), lhs, rhs, slack, holds ? Verdict::Holds : Verdict::Violated};
}

void DistanceReport::add(Inequality q) {
  const bool binding = parts.empty() ||
                       mpfr_less_p(q.slack.lower().get(), slack.lower().get()) ||
                       q.verdict == Verdict::Violated;
  if (parts.empty()) verdict = q.verdict;
  else verdict = worst(verdict, q.verdict);
  if (binding) {
    lhs = q.lhs;
    rhs = q.rhs;
    slack = q.slack;
  }
  parts.push_back(std::move(q));
}

nlohmann::json ball_json(const BallReal& x) {
  auto endpoint = [](const detail::Mpfr& v) -> nlohmann::json {
    if (mpfr_inf_p(v.get())) return mpfr_sgn(v.get()) < 0 ? "-inf" : "inf";
    return mpfr_get_d(v.get(), MPFR_RNDN);
  };
  return {{"lo", endpoint(x.lower())}, {"hi", endpoint(x.upper())}, {"hex", to_hex(x)}};
}

std::string rational_text(const Rational& q) { return q.get_str(); }

Rational fit_constant(const BallReal& required) {
  const Integer scale = Integer(1) << 40;
  Rational up = to_rational(required.upper()) * scale;
  Integer n = up.get_num() / up.get_den();
  if (Rational(n) < up) n += 1;
  return Rational(n, scale);
}

nlohmann::json DistanceReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["verdict"] = std::string(to_string(verdict));
  j["lhs"] = ball_json(lhs);
  j["rhs"] = ball_json(rhs);
  j["slack"] = ball_json(slack);
  j["parts"] = nlohmann::json::array();
  for (const auto& q : parts)
    j["parts"].push_back({{"label", q.label},
                          {"verdict", std::string(to_string(q.verdict))},
                          {"lhs", ball_json(q.lhs)},
                          {"rhs", ball_json(q.rhs)},
                          {"slack", ball_json(q.slack)}});
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : constants) c[k] = v;
  j["constants"] = c;
  nlohmann::json n = nlohmann::json::object();
  for (const auto& [k, v] : notes) n[k] = v;
  j["notes"] = n;
  if (required_constant) j["required_constant"] = ball_json(*required_constant);
  return j;
}

DistanceReport check_bezout1(const ProjectivePoint& theta, const EffectiveCycle& x,
                             const Rational& c, const Rational& c_prime, Precision p) {
  if (!x.is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "the sandwich is checked on 0-cycles");
  auto pts = x.points();
  if (pts.empty()) fail(ErrorKind::DomainError, "empty cycle");
  std::vector<BallReal> d, ld;
  for (const auto& wp : pts) {
    BallReal di = fs_distance(theta, wp.point, p);
    if (di.is_exact_zero()) fail(ErrorKind::PreconditionViolated, "theta lies on the support of X");
    ld.push_back(ball_log(di));
    d.push_back(std::move(di));
  }
  const long deg = x.degree();
  size_t j = 0;
  for (size_t i = 1; i < ld.size(); ++i)
    if (ld[i].mid_double() < ld[j].mid_double()) j = i;
  bool certified_argmin = true;
  for (size_t i = 0; i < d.size(); ++i)
    if (i != j && !certainly_le(d[j], d[i])) certified_argmin = false;
  BallReal m = d[0];
  for (const auto& di : d) m = min(m, di);
  BallReal log_m = certified_argmin ? ld[j] : ball_log(m);

  BallReal dpt(0L, p), s1(0L, p), s2(0L, p);
  for (size_t i = 0; i < pts.size(); ++i) {
    BallReal n(static_cast<long>(pts[i].multiplicity), p);
    dpt += n * ld[i];
    // Every point is at least as far as the closest one.
    if (!(certified_argmin && i == j)) s1 += n * clamp_nonneg(ld[i] - log_m);
    // All copies but one of the closest point contribute -log d >= 0.
    long copies = pts[i].multiplicity - (i == j ? 1 : 0);
    s2 += BallReal(copies, p) * clamp_nonneg(-ld[i]);
  }
  if (!certified_argmin) s2 += clamp_nonpos(log_m - ld[j]);
  BallReal cdeg = ball(c * deg, p), cpdeg = ball(c_prime * deg, p);
  DistanceReport r;
  r.check = "bezout1";
  r.add(make_inequality("deg X log|theta,X| <= D_pt + c deg X", BallReal(deg, p) * log_m, dpt + cdeg,
                        s1 + cdeg));
  r.add(make_inequality("D_pt + c deg X <= log|theta,X| + c' deg X", dpt + cdeg, log_m + cpdeg,
                        s2 + cpdeg - cdeg));
  r.constants = {{"c", rational_text(c)}, {"c_prime", rational_text(c_prime)}};
  r.notes = {{"D_pt", dpt.to_string(12)}, {"log_min_distance", log_m.to_string(12)}};
  return r;
}

namespace {

IntForm defining_form(const EffectiveCycle& y) {
  if (y.t() != 1 || !y.is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "expected a 0-cycle of P^1");
  std::optional<IntForm> g;
  for (const auto& c : y.components()) {
    if (!c.form) fail(ErrorKind::UnsupportedCycle, "component without a defining form");
    for (int k = 0; k < c.multiplicity; ++k) g = g ? *g * *c.form : *c.form;
  }
  if (!g) fail(ErrorKind::DomainError, "empty cycle");
  return *g;
}

IntForm partial(const IntForm& g, int var) {
  const int t = g.t();
  IntForm out(t, g.degree() - 1, Integer(0));
  const auto& mons = g.monomials();
  for (size_t k = 0; k < g.size(); ++k) {
    if (g[k] == 0 || mons[k][var] == 0) continue;
    Exponent e = mons[k];
    e[var] -= 1;
    out.at(e) += g[k] * mons[k][var];
  }
  return out;
}

}  // namespace

BallReal curve_distance_surrogate(const IntForm& g, const ProjectivePoint& theta, Precision p) {
  ComplexBall v = evaluate_at_unit(g, theta, p);
  if (v.is_exact_zero()) return BallReal(0L, p);
  BallReal grad2(0L, p);
  for (int i = 0; i <= g.t(); ++i) grad2 += evaluate_at_unit(partial(g, i), theta, p).abs2();
  if (!grad2.is_positive()) return BallReal(1L, p);
  return min(v.abs() / sqrt_nonneg(grad2), BallReal(1L, p));
}

namespace {

struct Setup {
  int D = 0;
  RatForm fperp;
  IntForm F;
  BallReal log_norm;
};

Setup project_off(const IntForm& g, const IntForm& f, Precision p) {
  Setup s;
  s.D = f.degree();
  SectionSubspace ideal = vanishing_subspace(std::vector<IntForm>{g}, f.t(), s.D);
  s.fperp = orthogonal_projection(to_rational(f), ideal);
  if (is_zero(s.fperp)) fail(ErrorKind::PreconditionViolated, "f lies in I_Y(D)");
  s.F = primitive_multiple(s.fperp);
  s.log_norm = log_l2_norm(s.fperp, p);
  return s;
}

}  // namespace

DistanceReport check_metric_bezout(const ProjectivePoint& theta, const EffectiveCycle& y,
                                   const IntForm& f, const MetricBezoutConstants& k, Precision p) {
  if (f.t() != y.t()) fail(ErrorKind::DimensionMismatch, "f and Y live in different P^t");
  BallReal lhs(0L, p), dist_y(0L, p), dist_z(0L, p), d_theta_y(0L, p);
  IntForm g;
  Setup s;
  if (y.t() == 1) {
    g = defining_form(y);
    if (share_factor(g, f)) fail(ErrorKind::ImproperIntersection, "f and Y share a point");
    s = project_off(g, f, p);
    if (share_factor(g, s.F)) fail(ErrorKind::ImproperIntersection, "f_Y^perp vanishes on Y");
    EffectiveCycle z = divisor_of(s.F, p);
    dist_y = min_distance(theta, y, p);
    dist_z = min_distance(theta, z, p);
    d_theta_y = algebraic_distance_points(theta, y, p);
    // Y.Z is empty in P^1.
  } else {
    if (y.components().size() != 1 || y.components()[0].kind != ComponentKind::Curve)
      fail(ErrorKind::UnsupportedCycle, "expected a single plane curve");
    g = *y.components()[0].form;
    s = project_off(g, f, p);
    EffectiveCycle yz = intersect_with_divisor(g, s.F, p);
    lhs = algebraic_distance_points(theta, yz, p);
    dist_y = curve_distance_surrogate(g, theta, p);
    dist_z = curve_distance_surrogate(s.F, theta, p);
    d_theta_y = algebraic_distance_divisor(theta, g, k.sigma, p);
  }
  const Certainty cmp = compare(dist_z, dist_y);
  if (cmp == Certainty::Overlap)
    fail(ErrorKind::IndeterminateBranch, "cannot order |Z,theta| and |Y,theta| at " + std::to_string(p) + " bits");
  const bool z_closer = cmp != Certainty::Greater;
  const long deg_y = y.degree(), deg_z = s.D;
  BallReal h_y = cycle_height(y, p, HeightConvention::Mahler, k.sigma);
  BallReal base = z_closer ? d_theta_y : log_abs_eval(s.fperp, theta, p);
  BallReal common = BallReal(2L * s.D, p) * h_y + BallReal(deg_y, p) * s.log_norm;
  BallReal scale(deg_y * deg_z, p);
  BallReal rhs = base + common + ball(k.dbar_prime, p) * scale;

  DistanceReport r;
  r.check = "metric-bezout";
  r.add(make_inequality(z_closer ? "D(theta,Y.Z) <= D(theta,Y) + 2D h(Y) + deg Y log|f^perp| + d' deg Y deg Z"
                                 : "D(theta,Y.Z) <= log|<f^perp|theta>| + 2D h(Y) + deg Y log|f^perp| + d' deg Y deg Z",
                        lhs, rhs));
  if (!base.is_neg_infinity() && lhs.is_finite()) r.required_constant = (lhs - base - common) / scale;
  r.constants = {{"dbar_prime", rational_text(k.dbar_prime)},
                 {"sigma_1", rational_text(k.sigma(1))},
                 {"sigma_2", rational_text(k.sigma(2))}};
  r.notes = {{"branch", z_closer ? "Z closer" : "Y closer"},
             {"dist_Y", dist_y.to_string(12)},
             {"dist_Z", dist_z.to_string(12)},
             {"h_Y", h_y.to_string(12)},
             {"log_norm_fperp", s.log_norm.to_string(12)}};
  if (y.t() == 2) r.notes.push_back({"distance_to_curves", "first-order surrogate |g|/|grad g|"});
  return r;
}

DistanceReport check_bezmult(const ProjectivePoint& theta, const EffectiveCycle& y,
                             const IntForm& f, const MetricBezoutConstants& k, Precision p) {
  if (y.t() != 1 || f.t() != 1) fail(ErrorKind::UnsupportedCycle, "the far-subset check runs in P^1");
  IntForm g = defining_form(y);
  if (share_factor(g, f)) fail(ErrorKind::ImproperIntersection, "f and Y share a point");
  Setup s = project_off(g, f, p);
  if (share_factor(g, s.F)) fail(ErrorKind::ImproperIntersection, "f_Y^perp vanishes on Y");
  EffectiveCycle z = divisor_of(s.F, p);
  BallReal dist_z = min_distance(theta, z, p);
  BallReal log_n2 = log_root_norm(s.F, p);
  BallReal half_d(Rational(s.D, 2), p);
  BallReal far(0L, p), d_yz(0L, p);
  long in_m = 0;
  for (const auto& wp : y.points()) {
    BallReal n(static_cast<long>(wp.multiplicity), p);
    BallReal dy = fs_distance(theta, wp.point, p);
    Certainty cmp = compare(dist_z, dy);
    if (cmp == Certainty::Overlap)
      fail(ErrorKind::IndeterminateBranch, "cannot decide membership in M at " + std::to_string(p) + " bits");
    if (cmp != Certainty::Greater) {
      far += n * ball_log(dy);
      in_m += wp.multiplicity;
    }
    d_yz += n * (log_abs_eval(s.F, wp.point, p) - log_n2 + half_d);
  }
  const long deg_y = y.degree(), deg_x = s.D;
  BallReal scale(deg_x * deg_y, p);
  DistanceReport r;
  r.check = "bezmult";
  r.add(make_inequality("D(Y.Z,theta) + D(Y,Z) <= sum_M n_y log|y,theta| + d deg X deg Y", d_yz,
                        far + ball(k.d, p) * scale));
  if (d_yz.is_finite()) r.required_constant = (d_yz - far) / scale;
  r.constants = {{"d", rational_text(k.d)}};
  r.notes = {{"M_size", std::to_string(in_m)},
             {"dist_Z", dist_z.to_string(12)},
             {"D_Y_Z", d_yz.to_string(12)}};
  return r;
}

AlgebraicPoint AlgebraicPoint::rational(const ProjectivePoint& x) {
  if (!x.is_exact() || x.dim() != 1) fail(ErrorKind::DomainError, "expected an exact point of P^1");
  const auto& c = x.integer_coords();
  IntForm f(1, 1, Integer(0));
  f[0] = -c[1];
  f[1] = c[0];
  return {primitive_part(f), x};
}

std::vector<AlgebraicPoint> AlgebraicPoint::roots_of(const IntForm& f, Precision p) {
  std::vector<AlgebraicPoint> out;
  for (const auto& fac : factor_binary_form(f, p))
    for (const auto& r : binary_form_roots(fac.form, p)) out.push_back({fac.form, r.point});
  return out;
}

namespace {

bool same_form(const IntForm& a, const IntForm& b) {
  return a == b || a == Integer(-1) * b;
}

Integer max_abs(const std::vector<Integer>& v) {
  Integer m = 0;
  for (const auto& x : v) m = std::max(m, Integer(abs(x)));
  return m;
}

}  // namespace

LiouvilleResult check_liouville(const AlgebraicPoint& alpha, const std::vector<AlgebraicPoint>& betas,
                                HeightConvention conv, const Rational& c, const Rational& c_prime,
                                Precision p) {
  const bool fs = conv == HeightConvention::FubiniStudy;
  auto height = [&](const IntForm& form) {
    return fs ? log_root_norm(form, p) : log_mahler_measure(form, p);
  };
  const long deg_a = alpha.degree();
  BallReal h_a = height(alpha.form);
  LiouvilleResult out;
  out.c1 = ball((c + c_prime) * deg_a, p) + h_a;
  out.c2 = BallReal(deg_a, p);
  for (const auto& beta : betas) {
    if (beta.point.is_exact() && alpha.point.is_exact() && beta.point == alpha.point)
      fail(ErrorKind::EqualPoints, "beta equals alpha");
    BallReal dist = fs_distance(alpha.point, beta.point, p);
    if (dist.is_exact_zero() || (same_form(alpha.form, beta.form) && dist.contains_zero()))
      fail(ErrorKind::EqualPoints, "beta equals alpha");
    const long deg_b = beta.degree();
    BallReal h_b = height(beta.form);
    BallReal lhs = -(out.c1 * BallReal(deg_b, p)) - out.c2 * h_b;
    BallReal rhs = ball_log(dist);
    DistanceReport r;
    r.check = "liouville";
    const std::string label = "-c1 deg beta - c2 h(beta) <= log|alpha,beta|";
    if (deg_a == 1 && deg_b == 1 && alpha.point.is_exact() && beta.point.is_exact() &&
        c + c_prime == 0) {
      const auto& a = alpha.point.integer_coords();
      const auto& b = beta.point.integer_coords();
      Integer det = abs(Integer(a[0] * b[1] - a[1] * b[0]));
      Integer na = a[0] * a[0] + a[1] * a[1], nb = b[0] * b[0] + b[1] * b[1];
      BallReal slack = ball_log(BallReal(det, p));
      bool holds = det >= 1;
      if (!fs) {
        Integer ma = max_abs(a), mb = max_abs(b);
        holds = det * det * ma * ma * mb * mb >= na * nb;
        slack = slack + ball_log(BallReal(Integer(ma * mb), p)) -
                ball_log(BallReal(Integer(na * nb), p)) * BallReal(Rational(1, 2), p);
      }
      r.add(exact_inequality(label, lhs, rhs, slack, holds));
      r.notes.push_back({"decided", "exact integer arithmetic"});
    } else {
      r.add(make_inequality(label, lhs, rhs));
    }
    r.constants = {{"c", rational_text(c)},
                   {"c_prime", rational_text(c_prime)},
                   {"c1", out.c1.to_string(12)},
                   {"c2", std::to_string(deg_a)},
                   {"heights", std::string(to_string(conv))}};
    r.notes.push_back({"beta", beta.point.to_string()});
    r.notes.push_back({"h_beta", h_b.to_string(12)});
    switch (r.verdict) {
      case Verdict::Holds:
        ++out.holds;
        break;
      case Verdict::Violated:
        ++out.violated;
        break;
      case Verdict::Indeterminate:
        ++out.indeterminate;
        break;
    }
    out.reports.push_back(std::move(r));
  }
  return out;
}

namespace {

long binom(long n, long k) {
  if (k < 0 || n < k) return 0;
  return binomial(n, k).get_si();
}

enum class HilbertShape { Ambient, FormZeroCycle, PointSet, Curve };

struct IdealData {
  HilbertShape shape;
  SectionSubspace ideal;
  std::optional<long> dbar;
};

IdealData ideal_of(const EffectiveCycle& x, int D) {
  const int t = x.t();
  if (x.codim() == 0) return {HilbertShape::Ambient, zero_subspace(t, D), 0};
  if (x.t() == 2 && x.codim() == 1) {
    if (x.components().size() != 1 || x.components()[0].multiplicity != 1)
      fail(ErrorKind::UnsupportedCycle, "only single reduced plane curves are supported");
    const IntForm& g = *x.components()[0].form;
    return {HilbertShape::Curve, vanishing_subspace(std::vector<IntForm>{g}, 2, D), g.degree() - 1};
  }
  if (!x.is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "unsupported cycle shape");
  bool all_forms = t == 1;
  for (const auto& c : x.components()) all_forms &= c.form.has_value();
  if (all_forms) {
    IntForm g = defining_form(x);
    return {HilbertShape::FormZeroCycle, vanishing_subspace(std::vector<IntForm>{g}, 1, D),
            g.degree() - 1};
  }
  std::vector<ProjectivePoint> pts;
  for (const auto& wp : x.points()) {
    if (!wp.point.is_exact() || wp.multiplicity != 1)
      fail(ErrorKind::UnsupportedCycle, "point sets must be exact and reduced");
    pts.push_back(wp.point);
  }
  return {HilbertShape::PointSet, vanishing_subspace(pts, t, D), std::nullopt};
}

}  // namespace

HilbertReport hilbert_function(const EffectiveCycle& x, int D) {
  if (D < 0) fail(ErrorKind::DomainError, "negative degree");
  IdealData data = ideal_of(x, D);
  const int t = x.t(), dim = x.dim();
  const long deg = x.degree();
  HilbertReport r;
  r.value = binom(D + t, t) - static_cast<long>(data.ideal.dim());
  r.upper_bound = deg * binom(D + dim, dim);
  if (data.dbar && D >= *data.dbar) {
    r.dbar = data.dbar;
    r.lower_bound = deg * binom(D - *data.dbar + dim, dim);
  }
  r.within_bounds = r.value <= r.upper_bound && (!r.lower_bound || r.value >= *r.lower_bound);
  return r;
}

ArithmeticHilbertReport arithmetic_hilbert(const EffectiveCycle& x, int D,
                                           const ArithmeticHilbertConstants& k, Precision p) {
  if (D < 0) fail(ErrorKind::DomainError, "negative degree");
  if (x.t() == 2 && x.codim() == 1) fail(ErrorKind::UnsupportedCycle, "curves are not supported here");
  IdealData data = ideal_of(x, D);
  ProjectedLattice lat = projected_lattice(data.ideal);
  ArithmeticHilbertReport r;
  r.rank = lat.rank();
  MetricLattice ml;
  ml.gram = lat.gram;
  r.value = r.rank == 0 ? BallReal(0L, p) : arithmetic_degree(ml, p);

  const long s = x.dim(), deg = x.degree();
  BallReal h = cycle_height(x, p, HeightConvention::Mahler, k.sigma);
  BallReal bin(binomial(D + s, D), p);
  BallReal dd(static_cast<long>(D), p), degb(deg, p);
  if (D >= 1) {
    BallReal shape = dd * h + degb * dd * ball(k.c3, p) +
                     degb * (ball_log(degb) * BallReal(Rational(1, 2), p) +
                             BallReal(s, p) * ball_log(dd));
    r.bounds.push_back(make_inequality("H <= (D h + deg D c3 + deg (log deg / 2 + s log D)) C(D+s,D)",
                                       r.value, shape * bin));
  }
  BallReal env = dd * bin * (h + ball(k.c5, p) * degb);
  r.bounds.push_back(make_inequality("H <= D C(D+s,D) (h + c5 deg)", r.value, env));
  r.bounds.push_back(make_inequality("-D C(D+s,D) (h + c5 deg) <= H", -env, r.value));
  if (data.dbar && D >= k.m * *data.dbar) {
    BallReal low = (ball(k.c1, p) * h - ball(k.c2, p) * degb) * pow(dd, static_cast<unsigned long>(s + 1));
    r.bounds.push_back(make_inequality("(c1 h - c2 deg) D^(s+1) <= H", low, r.value));
  }
  return r;
}

BezoutInstance random_bezout_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-9, 9), num(-60, 60), den(1, 60);
  std::uniform_int_distribution<int> gdeg(1, 3), fdeg(1, 4);
  for (;;) {
    IntForm g(1, gdeg(rng), Integer(0));
    for (auto& c : g.coeffs()) c = coef(rng);
    if (is_zero(g)) continue;
    g = primitive_part(g);
    IntForm f(1, fdeg(rng), Integer(0));
    for (auto& c : f.coeffs()) c = coef(rng);
    if (is_zero(f) || share_factor(g, f)) continue;
    SectionSubspace ideal = vanishing_subspace(std::vector<IntForm>{g}, 1, f.degree());
    RatForm fperp = orthogonal_projection(to_rational(f), ideal);
    if (is_zero(fperp)) continue;
    IntForm big = primitive_multiple(fperp);
    if (share_factor(g, big)) continue;
    ProjectivePoint theta = ProjectivePoint::exact(std::vector<Integer>{den(rng), num(rng)});
    if (evaluate_exact(g, theta) == 0 || evaluate_exact(big, theta) == 0) continue;
    return {theta, g, f};
  }
}

namespace {

using Checker = DistanceReport (*)(const ProjectivePoint&, const EffectiveCycle&, const IntForm&,
                                   const MetricBezoutConstants&, Precision);

// Runs a checker, doubling precision while the branch or the verdict is
// undecided. Returns the report and whether doubling was needed.
std::pair<DistanceReport, bool> run_resolving(Checker fn, const BezoutInstance& inst,
                                              const MetricBezoutConstants& k,
                                              const PrecisionPolicy& policy) {
  bool doubled = false;
  for (Precision p = policy.start;; p *= 2) {
    try {
      DistanceReport r = fn(inst.theta, divisor_of(inst.g, p), inst.f, k, p);
      if (r.verdict != Verdict::Indeterminate || p * 2 > policy.cap) return {r, doubled};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IndeterminateBranch && e.kind() != ErrorKind::BallStraddlesZero) throw;
      if (p * 2 > policy.cap) throw;
    }
    doubled = true;
  }
}

CalibrationSummary calibrate_one(const std::string& name, Checker fn, Rational MetricBezoutConstants::*field,
                                 const std::vector<BezoutInstance>& train,
                                 const std::vector<BezoutInstance>& holdout,
                                 const PrecisionPolicy& policy) {
  CalibrationSummary s;
  s.check = name;
  s.train = train.size();
  s.holdout = holdout.size();
  MetricBezoutConstants k;
  std::optional<Rational> fitted;
  for (const auto& inst : train) {
    auto [r, doubled] = run_resolving(fn, inst, k, policy);
    if (!r.required_constant) continue;
    Rational need = fit_constant(*r.required_constant);
    if (!fitted || need > *fitted) fitted = need;
  }
  s.fitted = fitted ? *fitted : Rational(0);
  k.*field = s.fitted;
  for (const auto& inst : holdout) {
    auto [r, doubled] = run_resolving(fn, inst, k, policy);
    if (doubled) ++s.resolved_by_precision;
    switch (r.verdict) {
      case Verdict::Holds:
        ++s.holds;
        break;
      case Verdict::Violated:
        ++s.violated;
        break;
      case Verdict::Indeterminate:
        ++s.indeterminate;
        break;
    }
    s.holdout_reports.push_back(std::move(r));
  }
  return s;
}

}  // namespace

std::pair<CalibrationSummary, CalibrationSummary> calibrate_metric_bezout(
    uint64_t seed, size_t n_train, size_t n_holdout, const PrecisionPolicy& policy) {
  std::mt19937_64 rng(seed);
  std::vector<BezoutInstance> train, holdout;
  for (size_t i = 0; i < n_train; ++i) train.push_back(random_bezout_instance(rng));
  for (size_t i = 0; i < n_holdout; ++i) holdout.push_back(random_bezout_instance(rng));
  return {calibrate_one("metric-bezout", &check_metric_bezout, &MetricBezoutConstants::dbar_prime,
                        train, holdout, policy),
          calibrate_one("bezmult", &check_bezmult, &MetricBezoutConstants::d, train, holdout, policy)};
}

}  // namespace dioph
