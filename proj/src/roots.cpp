#include "dioph/roots.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

namespace dioph {

using detail::Mpfr;

IntPoly poly_trim(IntPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int poly_degree(const IntPoly& p) { return static_cast<int>(poly_trim(p).size()) - 1; }

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, Integer(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(std::move(r));
}

IntPoly poly_derivative(const IntPoly& p) {
  IntPoly r;
  for (size_t i = 1; i < p.size(); ++i) r.push_back(Integer(static_cast<long>(i)) * p[i]);
  return poly_trim(std::move(r));
}

Integer poly_content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IntPoly poly_primitive(const IntPoly& p) {
  IntPoly q = poly_trim(p);
  if (q.empty()) return q;
  Integer g = poly_content(q);
  if (q.back() < 0) g = -g;
  for (auto& c : q) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return q;
}

bool poly_divides(const IntPoly& d0, const IntPoly& a0, IntPoly* quotient) {
  IntPoly d = poly_trim(d0), a = poly_trim(a0);
  if (d.empty()) fail(ErrorKind::DomainError, "division by the zero polynomial");
  if (a.size() < d.size()) {
    if (!a.empty()) return false;
    if (quotient) quotient->clear();
    return true;
  }
  IntPoly q(a.size() - d.size() + 1, Integer(0));
  for (size_t k = q.size(); k-- > 0;) {
    const Integer& top = a[k + d.size() - 1];
    if (!mpz_divisible_p(top.get_mpz_t(), d.back().get_mpz_t())) return false;
    Integer c = top / d.back();
    q[k] = c;
    if (c != 0)
      for (size_t j = 0; j < d.size(); ++j) a[k + j] -= c * d[j];
  }
  for (const auto& c : a)
    if (c != 0) return false;
  if (quotient) *quotient = poly_trim(std::move(q));
  return true;
}

namespace {

// Pseudo-remainder of a by b.
IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
  while (!a.empty() && a.size() >= b.size()) {
    Integer lead = a.back();
    size_t shift = a.size() - b.size();
    for (auto& c : a) c *= b.back();
    for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= lead * b[j];
    a = poly_trim(std::move(a));
  }
  return a;
}

}  // namespace

IntPoly poly_gcd(const IntPoly& a0, const IntPoly& b0) {
  IntPoly a = poly_primitive(a0), b = poly_primitive(b0);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    IntPoly r = poly_primitive(pseudo_remainder(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return poly_primitive(a);
}

ComplexBall poly_evaluate(const IntPoly& p, const ComplexBall& z) {
  Precision prec = z.precision();
  ComplexBall acc{BallReal(0L, prec)};
  for (size_t k = p.size(); k-- > 0;) {
    acc *= z;
    acc += ComplexBall(BallReal(p[k], prec));
  }
  return acc;
}

std::vector<SquarefreePart> squarefree_decomposition(const IntPoly& p0) {
  IntPoly p = poly_primitive(p0);
  std::vector<SquarefreePart> out;
  if (p.size() <= 1) return out;
  IntPoly g = poly_gcd(p, poly_derivative(p));
  IntPoly w;
  poly_divides(g, p, &w);
  w = poly_primitive(w);
  for (int i = 1; w.size() > 1; ++i) {
    IntPoly y = poly_gcd(w, g);
    IntPoly z;
    poly_divides(y, w, &z);
    z = poly_primitive(z);
    if (z.size() > 1) out.push_back({z, i});
    IntPoly next_g;
    poly_divides(y, g, &next_g);
    g = poly_primitive(next_g);
    w = y;
  }
  return out;
}

namespace {

// Midpoint complex arithmetic at a working precision, used for iteration only.
struct Cx {
  Mpfr re, im;
  explicit Cx(Precision p) : re(p), im(p) {}
};

void cx_set_prec(Cx& z, Precision p) {
  mpfr_prec_round(z.re.get(), p, MPFR_RNDN);
  mpfr_prec_round(z.im.get(), p, MPFR_RNDN);
}

// r = a * b
void cx_mul(Cx& r, const Cx& a, const Cx& b, Mpfr& t1, Mpfr& t2) {
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  Mpfr t3(t1.prec());
  mpfr_mul(t3.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_fma(r.im.get(), a.im.get(), b.re.get(), t3.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
}

// r = a / b
void cx_div(Cx& r, const Cx& a, const Cx& b) {
  Precision p = mpfr_get_prec(r.re.get());
  Mpfr den(p), t1(p), t2(p), nr(p), ni(p);
  mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
  mpfr_fma(den.get(), b.im.get(), b.im.get(), den.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_fma(nr.get(), a.im.get(), b.im.get(), t1.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(ni.get(), t2.get(), t1.get(), MPFR_RNDN);
  mpfr_div(r.re.get(), nr.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), ni.get(), den.get(), MPFR_RNDN);
}

// Value and derivative of p at z by Horner.
void cx_eval(const std::vector<Mpfr>& coeffs, const Cx& z, Cx& val, Cx& der) {
  Precision p = mpfr_get_prec(z.re.get());
  Mpfr t1(p), t2(p);
  Cx tmp(p);
  mpfr_set_zero(val.re.get(), 1);
  mpfr_set_zero(val.im.get(), 1);
  mpfr_set_zero(der.re.get(), 1);
  mpfr_set_zero(der.im.get(), 1);
  for (size_t k = coeffs.size(); k-- > 0;) {
    cx_mul(tmp, der, z, t1, t2);
    mpfr_add(der.re.get(), tmp.re.get(), val.re.get(), MPFR_RNDN);
    mpfr_set(der.im.get(), tmp.im.get(), MPFR_RNDN);
    mpfr_add(der.im.get(), der.im.get(), val.im.get(), MPFR_RNDN);
    cx_mul(tmp, val, z, t1, t2);
    mpfr_add(val.re.get(), tmp.re.get(), coeffs[k].get(), MPFR_RNDN);
    mpfr_set(val.im.get(), tmp.im.get(), MPFR_RNDN);
  }
}

double cx_log2_abs(const Cx& z) {
  if (mpfr_zero_p(z.re.get()) && mpfr_zero_p(z.im.get())) return -1e18;
  long er = 0, ei = 0;
  double dr = mpfr_zero_p(z.re.get()) ? 0 : mpfr_get_d_2exp(&er, z.re.get(), MPFR_RNDN);
  double di = mpfr_zero_p(z.im.get()) ? 0 : mpfr_get_d_2exp(&ei, z.im.get(), MPFR_RNDN);
  long e = std::max(mpfr_zero_p(z.re.get()) ? LONG_MIN / 2 : er,
                    mpfr_zero_p(z.im.get()) ? LONG_MIN / 2 : ei);
  double a = std::ldexp(dr, static_cast<int>(er - e)), b = std::ldexp(di, static_cast<int>(ei - e));
  return 0.5 * std::log2(a * a + b * b) + static_cast<double>(e);
}

double log2_abs(const Integer& x) {
  if (x == 0) return -1e18;
  long e = 0;
  double d = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

// Starting points on circles whose radii come from the Newton polygon of
// (i, log2 |a_i|).
std::vector<Cx> initial_points(const IntPoly& p, Precision prec) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<std::pair<int, double>> pts;
  for (int i = 0; i <= n; ++i)
    if (p[i] != 0) pts.push_back({i, log2_abs(p[i])});
  std::vector<std::pair<int, double>> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      double cross = (b.first - a.first) * (q.second - a.second) -
                     (b.second - a.second) * (q.first - a.first);
      if (cross >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(q);
  }
  std::vector<Cx> z;
  int lower_zero = pts.front().first;
  for (int k = 0; k < lower_zero; ++k) {
    Cx c(prec);
    mpfr_set_d(c.re.get(), 1e-3 * (k + 1), MPFR_RNDN);
    mpfr_set_d(c.im.get(), 0.7e-3 * (k + 1), MPFR_RNDN);
    z.push_back(std::move(c));
  }
  const double offset = 0.4;
  for (size_t h = 0; h + 1 < hull.size(); ++h) {
    int i = hull[h].first, j = hull[h + 1].first;
    int m = j - i;
    double log2r = (hull[h].second - hull[h + 1].second) / m;
    for (int k = 0; k < m; ++k) {
      double ang = 2 * std::numbers::pi * k / m + offset + 0.1 * static_cast<double>(h);
      Cx c(prec);
      mpfr_set_d(c.re.get(), std::cos(ang), MPFR_RNDN);
      mpfr_set_d(c.im.get(), std::sin(ang), MPFR_RNDN);
      long ex = static_cast<long>(std::lround(log2r));
      mpfr_mul_2si(c.re.get(), c.re.get(), ex, MPFR_RNDN);
      mpfr_mul_2si(c.im.get(), c.im.get(), ex, MPFR_RNDN);
      z.push_back(std::move(c));
    }
  }
  return z;
}

// Aberth iteration at precision prec; returns true on convergence.
bool aberth(const IntPoly& p, std::vector<Cx>& z, Precision prec, int max_iter) {
  const size_t n = z.size();
  std::vector<Mpfr> coeffs;
  for (const auto& c : p) {
    Mpfr m(prec);
    mpfr_set_z(m.get(), c.get_mpz_t(), MPFR_RNDN);
    coeffs.push_back(std::move(m));
  }
  for (auto& zi : z) cx_set_prec(zi, prec);
  std::vector<char> done(n, 0);
  Cx val(prec), der(prec), ratio(prec), sum(prec), diff(prec), inv(prec), w(prec), one(prec);
  mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
  Mpfr t1(prec), t2(prec);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      cx_eval(coeffs, z[i], val, der);
      if (mpfr_zero_p(val.re.get()) && mpfr_zero_p(val.im.get())) {
        done[i] = 1;
        continue;
      }
      if (mpfr_zero_p(der.re.get()) && mpfr_zero_p(der.im.get())) {
        mpfr_nextabove(z[i].re.get());
        mpfr_mul_d(z[i].im.get(), z[i].im.get(), 1.0001, MPFR_RNDN);
        all = false;
        continue;
      }
      cx_div(ratio, val, der);
      mpfr_set_zero(sum.re.get(), 1);
      mpfr_set_zero(sum.im.get(), 1);
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        mpfr_sub(diff.re.get(), z[i].re.get(), z[j].re.get(), MPFR_RNDN);
        mpfr_sub(diff.im.get(), z[i].im.get(), z[j].im.get(), MPFR_RNDN);
        if (mpfr_zero_p(diff.re.get()) && mpfr_zero_p(diff.im.get())) {
          mpfr_set_d(diff.re.get(), 1e-30, MPFR_RNDN);
        }
        cx_div(inv, one, diff);
        mpfr_add(sum.re.get(), sum.re.get(), inv.re.get(), MPFR_RNDN);
        mpfr_add(sum.im.get(), sum.im.get(), inv.im.get(), MPFR_RNDN);
      }
      // w = ratio / (1 - ratio * sum)
      cx_mul(w, ratio, sum, t1, t2);
      mpfr_ui_sub(w.re.get(), 1, w.re.get(), MPFR_RNDN);
      mpfr_neg(w.im.get(), w.im.get(), MPFR_RNDN);
      cx_div(w, ratio, w);
      mpfr_sub(z[i].re.get(), z[i].re.get(), w.re.get(), MPFR_RNDN);
      mpfr_sub(z[i].im.get(), z[i].im.get(), w.im.get(), MPFR_RNDN);
      double lw = cx_log2_abs(w);
      double lz = std::max(0.0, cx_log2_abs(z[i]));
      if (lw - lz < -static_cast<double>(prec) + 8)
        done[i] = 1;
      else
        all = false;
    }
    if (all) return true;
  }
  return false;
}

ComplexBall point_ball(const Cx& z) {
  return ComplexBall(BallReal::from_endpoints(z.re, z.re), BallReal::from_endpoints(z.im, z.im));
}

// Disk centered at c with radius r (a real upper bound), as a rectangle.
ComplexBall disk_ball(const ComplexBall& c, const BallReal& r) {
  BallReal rr = BallReal::from_endpoints(r.upper(), r.upper());
  BallReal sym = hull(-rr, rr);
  return {c.re() + sym, c.im() + sym};
}

// Certifies approximations with the Gershgorin disks of the Weierstrass
// matrix diag(z) - W 1^T, whose characteristic polynomial is p / lc.
std::optional<std::vector<ComplexBall>> certify(const IntPoly& p, const std::vector<Cx>& z,
                                                Precision prec) {
  const size_t n = z.size();
  std::vector<ComplexBall> zb;
  for (const auto& zi : z) zb.push_back(point_ball(zi));
  BallReal lc(p.back(), prec);
  std::vector<ComplexBall> centers;
  std::vector<BallReal> radii;
  for (size_t i = 0; i < n; ++i) {
    ComplexBall denom(lc);
    for (size_t j = 0; j < n; ++j)
      if (j != i) denom *= zb[i] - zb[j];
    if (denom.contains_zero()) return std::nullopt;
    ComplexBall w = poly_evaluate(p, zb[i]) / denom;
    ComplexBall c = zb[i] - w;
    BallReal r = w.abs() * BallReal(static_cast<long>(n - 1), prec);
    // Fold the center's own uncertainty into the radius.
    BallReal cr = BallReal::from_endpoints(c.re().rad(), c.re().rad()) +
                  BallReal::from_endpoints(c.im().rad(), c.im().rad());
    centers.push_back(c);
    radii.push_back(r + cr);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      ComplexBall ci(BallReal::from_endpoints(centers[i].re().mid(), centers[i].re().mid()),
                     BallReal::from_endpoints(centers[i].im().mid(), centers[i].im().mid()));
      ComplexBall cj(BallReal::from_endpoints(centers[j].re().mid(), centers[j].re().mid()),
                     BallReal::from_endpoints(centers[j].im().mid(), centers[j].im().mid()));
      if (!certainly_lt(radii[i] + radii[j], (ci - cj).abs())) return std::nullopt;
    }
  std::vector<ComplexBall> out;
  for (size_t i = 0; i < n; ++i) {
    ComplexBall c(BallReal::from_endpoints(centers[i].re().mid(), centers[i].re().mid()),
                  BallReal::from_endpoints(centers[i].im().mid(), centers[i].im().mid()));
    out.push_back(disk_ball(c, radii[i]));
  }
  return out;
}

}  // namespace

std::vector<ComplexBall> isolate_roots(const IntPoly& p0, Precision p) {
  IntPoly poly = poly_trim(p0);
  const int n = static_cast<int>(poly.size()) - 1;
  if (n < 1) return {};
  if (n == 1) {
    Rational r(-poly[0], poly[1]);
    r.canonicalize();
    return {ComplexBall(BallReal(r, p))};
  }
  std::vector<Cx> z = initial_points(poly, std::min<Precision>(p, 128));
  Precision wp = std::min<Precision>(p, 128);
  aberth(poly, z, wp, 400 + 10 * n);
  for (Precision target = std::max<Precision>(p, 64);; target *= 2) {
    while (wp < target) {
      wp = std::min(wp * 2, target);
      aberth(poly, z, wp, 60);
    }
    aberth(poly, z, wp, 60);
    if (auto out = certify(poly, z, wp)) return *out;
    if (target * 2 > kMaxPrecision)
      fail(ErrorKind::PrecisionExhausted,
           "root isolation did not certify at " + std::to_string(target) + " bits");
    // Restart from fresh points when the previous set failed to separate.
    if (target >= 1024) {
      auto fresh = initial_points(poly, wp);
      aberth(poly, fresh, wp, 400 + 10 * n);
      z = std::move(fresh);
    }
  }
}

BallReal log_mahler_measure(const IntPoly& p0, Precision p) {
  IntPoly poly = poly_trim(p0);
  if (poly.empty()) fail(ErrorKind::DomainError, "Mahler measure of the zero polynomial");
  BallReal acc = ball_log(abs(BallReal(poly.back(), p)));
  for (const auto& part : squarefree_decomposition(poly)) {
    for (const auto& r : isolate_roots(part.poly, p)) {
      BallReal m = max(BallReal(1L, p), r.abs());
      acc += ball_log(m) * BallReal(static_cast<long>(part.multiplicity), p);
    }
  }
  return acc;
}

namespace {

bool ball_contains_integer(const BallReal& b, Integer* out) {
  if (!b.is_finite()) return false;
  Mpfr lo(b.precision()), hi(b.precision());
  mpfr_ceil(lo.get(), b.lower().get());
  mpfr_floor(hi.get(), b.upper().get());
  if (mpfr_greater_p(lo.get(), hi.get())) return false;
  if (out) {
    mpz_class v;
    mpfr_get_z(v.get_mpz_t(), lo.get(), MPFR_RNDN);
    *out = v;
  }
  return true;
}

// Groups root indices into complex-conjugation orbits.
std::vector<std::vector<size_t>> conjugation_orbits(const std::vector<ComplexBall>& roots) {
  const size_t n = roots.size();
  std::vector<char> used(n, 0);
  std::vector<std::vector<size_t>> orbits;
  for (size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    if (roots[i].im().contains_zero()) {
      orbits.push_back({i});
      continue;
    }
    size_t best = n;
    double bestd = 0;
    ComplexBall c = roots[i].conj();
    for (size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      double d = (c - roots[j]).abs().hi_double();
      if (best == n || d < bestd) {
        best = j;
        bestd = d;
      }
    }
    if (best == n) {
      orbits.push_back({i});
    } else {
      used[best] = 1;
      orbits.push_back({i, best});
    }
  }
  return orbits;
}

// Integer candidate lc * prod (z - r_i), or nothing when a coefficient ball
// does not pin down an integer.
std::optional<IntPoly> candidate(const Integer& lc, const std::vector<ComplexBall>& roots,
                                 const std::vector<size_t>& idx, Precision prec, bool* too_wide) {
  // Cheap filters on the trace and norm coefficients.
  ComplexBall s(BallReal(0L, prec)), prod(BallReal(lc, prec));
  for (size_t i : idx) {
    s += roots[i];
    prod *= -roots[i];
  }
  s *= BallReal(lc, prec);
  if (!ball_contains_integer(s.re(), nullptr) || !ball_contains_integer(prod.re(), nullptr))
    return std::nullopt;
  std::vector<ComplexBall> c{ComplexBall(BallReal(lc, prec))};
  for (size_t i : idx) {
    std::vector<ComplexBall> next(c.size() + 1, ComplexBall(BallReal(0L, prec)));
    for (size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= c[k] * roots[i];
    }
    c = std::move(next);
  }
  IntPoly out;
  for (const auto& ck : c) {
    Integer v;
    if (!ball_contains_integer(ck.re(), &v)) return std::nullopt;
    if (ck.re().rad_log2() >= -1 || ck.im().rad_log2() >= -1) {
      *too_wide = true;
      return std::nullopt;
    }
    out.push_back(v);
  }
  return poly_trim(std::move(out));
}

void for_each_subset(size_t n, size_t k, const std::function<bool(const std::vector<size_t>&)>& fn) {
  std::vector<size_t> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    if (fn(idx)) return;
    size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<IntPoly> factor_squarefree(const IntPoly& p0, Precision p) {
  IntPoly poly = poly_primitive(p0);
  if (poly.size() <= 2) return poly.size() == 2 ? std::vector<IntPoly>{poly} : std::vector<IntPoly>{};
  // Coefficients of a factor are bounded by 2^deg M(p); leave room for that.
  double bits = log2_abs(poly.back()) + static_cast<double>(poly.size());
  for (const auto& c : poly) bits = std::max(bits, log2_abs(c) + static_cast<double>(poly.size()));
  Precision prec = std::max<Precision>(p, static_cast<Precision>(2 * bits) + 64);
  std::vector<IntPoly> factors;
  for (;; prec *= 2) {
    if (prec > kMaxPrecision) fail(ErrorKind::PrecisionExhausted, "factorization needs more precision");
    std::vector<ComplexBall> roots = isolate_roots(poly, prec);
    auto orbits = conjugation_orbits(roots);
    IntPoly rest = poly;
    factors.clear();
    bool too_wide = false;
    // Orbits are removed as factors are found.
    std::vector<std::vector<size_t>> live = orbits;
    bool progress = true;
    while (progress && poly_degree(rest) > 1) {
      progress = false;
      int deg_rest = poly_degree(rest);
      for (size_t k = 1; k <= live.size() && !progress; ++k) {
        for_each_subset(live.size(), k, [&](const std::vector<size_t>& pick) {
          std::vector<size_t> idx;
          for (size_t o : pick) idx.insert(idx.end(), live[o].begin(), live[o].end());
          if (2 * static_cast<int>(idx.size()) > deg_rest) return false;
          auto cand = candidate(rest.back(), roots, idx, prec, &too_wide);
          if (!cand) return false;
          IntPoly prim = poly_primitive(*cand);
          IntPoly q;
          if (!poly_divides(prim, rest, &q)) return false;
          factors.push_back(prim);
          rest = poly_primitive(q);
          std::vector<std::vector<size_t>> keep;
          for (size_t o = 0; o < live.size(); ++o)
            if (std::find(pick.begin(), pick.end(), o) == pick.end()) keep.push_back(live[o]);
          live = std::move(keep);
          progress = true;
          return true;
        });
      }
    }
    if (too_wide && progress == false && poly_degree(rest) > 1 && !factors.empty()) {
      // fall through: rest may still be irreducible; decided below
    }
    if (too_wide) continue;
    if (poly_degree(rest) >= 1) factors.push_back(poly_primitive(rest));
    return factors;
  }
}

std::vector<FormFactor> factor_binary_form(const IntForm& f, Precision p) {
  if (f.t() != 1) fail(ErrorKind::DimensionMismatch, "factor_binary_form expects a binary form");
  if (is_zero(f)) fail(ErrorKind::DomainError, "cannot factor the zero form");
  IntPoly poly = poly_trim(dehomogenize(f));
  std::vector<FormFactor> out;
  int at_infinity = f.degree() - poly_degree(poly);
  if (at_infinity > 0) out.push_back({parse_form("x0", 1), at_infinity});
  for (const auto& part : squarefree_decomposition(poly))
    for (const auto& q : factor_squarefree(part.poly, p))
      out.push_back({homogenize(q, poly_degree(q)), part.multiplicity});
  return out;
}

std::vector<FormRoot> binary_form_roots(const IntForm& f, Precision p) {
  std::vector<FormRoot> out;
  for (const auto& fac : factor_binary_form(f, p)) {
    IntPoly q = poly_trim(dehomogenize(fac.form));
    if (fac.form.degree() == 1) {
      if (q.size() == 1) {
        out.push_back({ProjectivePoint::exact(std::vector<Integer>{0, 1}), fac.multiplicity});
      } else {
        out.push_back({ProjectivePoint::exact(std::vector<Integer>{q[1], -q[0]}), fac.multiplicity});
      }
      continue;
    }
    for (const auto& r : isolate_roots(q, p)) {
      ComplexBall one(BallReal(1L, r.precision()));
      out.push_back({ProjectivePoint::analytic({one, r}), fac.multiplicity});
    }
  }
  return out;
}

BallReal log_mahler_measure(const IntForm& f, Precision p) {
  if (f.t() != 1) fail(ErrorKind::DimensionMismatch, "Mahler measure expects a binary form");
  return log_mahler_measure(poly_trim(dehomogenize(f)), p);
}

BallReal log_root_norm(const IntForm& f, Precision p) {
  if (f.t() != 1) fail(ErrorKind::DimensionMismatch, "log_root_norm expects a binary form");
  IntPoly poly = poly_trim(dehomogenize(f));
  if (poly.empty()) fail(ErrorKind::DomainError, "root norm of the zero form");
  BallReal acc = ball_log(abs(BallReal(poly.back(), p)));
  BallReal half(Rational(1, 2), p);
  for (const auto& part : squarefree_decomposition(poly))
    for (const auto& r : isolate_roots(part.poly, p))
      acc += half * ball_log(BallReal(1L, p) + r.abs2()) *
             BallReal(static_cast<long>(part.multiplicity), p);
  return acc;
}

Integer resultant(const IntPoly& a0, const IntPoly& b0) {
  IntPoly a = poly_trim(a0), b = poly_trim(b0);
  if (a.empty() || b.empty()) return 0;
  const size_t m = a.size() - 1, n = b.size() - 1;
  if (m == 0 && n == 0) return 1;
  if (m == 0) {
    Integer r = 1;
    for (size_t i = 0; i < n; ++i) r *= a[0];
    return r;
  }
  if (n == 0) {
    Integer r = 1;
    for (size_t i = 0; i < m; ++i) r *= b[0];
    return r;
  }
  IntMatrix s(m + n, std::vector<Integer>(m + n, Integer(0)));
  for (size_t r = 0; r < n; ++r)
    for (size_t k = 0; k <= m; ++k) s[r][r + (m - k)] = a[k];
  for (size_t r = 0; r < m; ++r)
    for (size_t k = 0; k <= n; ++k) s[n + r][r + (n - k)] = b[k];
  return bareiss_determinant(std::move(s));
}

IntForm substitute_linear(const IntForm& f, const IntMatrix& a) {
  const int t = f.t();
  if (a.size() != static_cast<size_t>(t + 1))
    fail(ErrorKind::DimensionMismatch, "substitution matrix has the wrong size");
  std::vector<IntForm> lin;
  for (int i = 0; i <= t; ++i) {
    IntForm l(t, 1, Integer(0));
    for (int j = 0; j <= t; ++j) {
      Exponent e(t + 1, 0);
      e[j] = 1;
      l.at(e) = a[i][j];
    }
    lin.push_back(l);
  }
  IntForm out(t, f.degree(), Integer(0));
  const auto& mons = f.monomials();
  for (size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0) continue;
    IntForm term = monomial_form(t, Exponent(t + 1, 0), f[k]);
    for (int i = 0; i <= t; ++i)
      for (int e = 0; e < mons[k][i]; ++e) term = term * lin[i];
    out = out + term;
  }
  return out;
}

namespace {

// g(1, z, y) as a polynomial in y for integer z.
IntPoly slice(const IntForm& g, const Integer& z) {
  IntPoly out(g.degree() + 1, Integer(0));
  const auto& mons = g.monomials();
  for (size_t k = 0; k < g.size(); ++k) {
    if (g[k] == 0) continue;
    Integer v = g[k];
    for (int e = 0; e < mons[k][1]; ++e) v *= z;
    out[mons[k][2]] += v;
  }
  return poly_trim(std::move(out));
}

void require_monic_in_last(const IntForm& g) {
  if (g.t() != 2) fail(ErrorKind::DimensionMismatch, "elimination expects ternary forms");
  if (g.at(Exponent{0, 0, g.degree()}) == 0)
    fail(ErrorKind::PreconditionViolated, "x2-leading coefficient vanishes; change coordinates first");
}

// Interpolates a polynomial of degree <= d from values at z = 0..d and
// homogenizes it to degree D.
IntPoly interpolate(const std::vector<Integer>& values) {
  const size_t n = values.size();
  // Newton divided differences.
  std::vector<Rational> dd(values.begin(), values.end());
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(j));
      if (i == j) break;
    }
  std::vector<Rational> poly{dd[n - 1]};
  for (size_t k = n - 1; k-- > 0;) {
    // poly = poly * (z - k) + dd[k]
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * Rational(static_cast<long>(k));
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  IntPoly ip;
  for (auto& c : poly) {
    c.canonicalize();
    if (c.get_den() != 1) fail(ErrorKind::DomainError, "interpolated resultant is not integral");
    ip.push_back(c.get_num());
  }
  return poly_trim(std::move(ip));
}

}  // namespace

IntForm eliminate_last_variable(const IntForm& g, const IntForm& f) {
  require_monic_in_last(g);
  require_monic_in_last(f);
  const int d = g.degree() * f.degree();
  std::vector<Integer> values;
  for (int k = 0; k <= d; ++k) values.push_back(resultant(slice(g, k), slice(f, k)));
  return homogenize(interpolate(values), d);
}

std::pair<IntPoly, IntPoly> first_subresultant(const IntForm& g, const IntForm& f) {
  require_monic_in_last(g);
  require_monic_in_last(f);
  const int m = g.degree(), n = f.degree();
  if (m + n < 3) fail(ErrorKind::DimensionMismatch, "first subresultant needs m + n >= 3");
  const int bound = (n - 1) * m + (m - 1) * n;
  std::vector<Integer> v0, v1;
  for (int k = 0; k <= bound; ++k) {
    IntPoly a = slice(g, k), b = slice(f, k);
    a.resize(m + 1, Integer(0));
    b.resize(n + 1, Integer(0));
    const size_t size = m + n - 2;
    const size_t width = m + n - 1;  // powers y^{m+n-2} .. y^0
    IntMatrix rows;
    for (int r = n - 2; r >= 0; --r) {
      std::vector<Integer> row(width, Integer(0));
      for (int e = 0; e <= m; ++e) row[width - 1 - (e + r)] = a[e];
      rows.push_back(row);
    }
    for (int r = m - 2; r >= 0; --r) {
      std::vector<Integer> row(width, Integer(0));
      for (int e = 0; e <= n; ++e) row[width - 1 - (e + r)] = b[e];
      rows.push_back(row);
    }
    for (int i = 0; i <= 1; ++i) {
      IntMatrix mat(size, std::vector<Integer>(size, Integer(0)));
      for (size_t r = 0; r < size; ++r) {
        for (size_t c = 0; c + 1 < size; ++c) mat[r][c] = rows[r][c];
        mat[r][size - 1] = rows[r][width - 1 - i];
      }
      (i == 0 ? v0 : v1).push_back(bareiss_determinant(std::move(mat)));
    }
  }
  return {interpolate(v0), interpolate(v1)};
}

}  // namespace dioph
