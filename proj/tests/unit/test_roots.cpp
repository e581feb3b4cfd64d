#include "doctest.h"

#include <algorithm>
#include <random>

#include "dioph/roots.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

IntPoly P(std::initializer_list<long> c) {
  IntPoly p;
  for (long x : c) p.push_back(Integer(x));
  return p;
}

std::vector<Rational> as_rational(const IntPoly& p) { return {p.begin(), p.end()}; }

bool contains(const ComplexBall& b, std::complex<long double> z, long double slack = 1e-12L) {
  auto in = [&](const BallReal& r, long double v) {
    return r.lo_double() - slack <= v && v <= r.hi_double() + slack;
  };
  return in(b.re(), z.real()) && in(b.im(), z.imag());
}

}  // namespace

TEST_CASE("squarefree decomposition") {
  // (z - 1)^3 (z + 2)^2 (z^2 + 1)
  IntPoly p = poly_mul(poly_mul(poly_mul(P({-1, 1}), poly_mul(P({-1, 1}), P({-1, 1}))),
                                poly_mul(P({2, 1}), P({2, 1}))),
                       P({1, 0, 1}));
  auto parts = squarefree_decomposition(p);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].multiplicity == 1);
  CHECK(parts[0].poly == P({1, 0, 1}));
  CHECK(parts[1].multiplicity == 2);
  CHECK(parts[1].poly == P({2, 1}));
  CHECK(parts[2].multiplicity == 3);
  CHECK(parts[2].poly == P({-1, 1}));
  IntPoly back{Integer(1)};
  for (const auto& part : parts)
    for (int k = 0; k < part.multiplicity; ++k) back = poly_mul(back, part.poly);
  CHECK(back == p);
}

TEST_CASE("root isolation encloses the roots") {
  IntPoly p = P({-2, 0, 1});
  auto roots = isolate_roots(p, 128);
  REQUIRE(roots.size() == 2);
  BallReal s2 = eval_constant("sqrt(2)", 128);
  int hits = 0;
  for (const auto& r : roots) {
    hits += r.re().contains(BallReal::from_endpoints(s2.lower(), s2.lower())) ? 1 : 0;
    hits += r.re().contains(BallReal::from_endpoints((-s2).lower(), (-s2).lower())) ? 1 : 0;
    CHECK(r.re().rad_log2() < -100);
  }
  CHECK(hits == 2);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-20, 20);
  for (int trial = 0; trial < 10; ++trial) {
    IntPoly q;
    for (int i = 0; i < 7; ++i) q.push_back(Integer(coef(rng)));
    q.push_back(Integer(1 + trial));
    q = poly_primitive(q);
    if (squarefree_decomposition(q).size() != 1 || q.front() == 0) continue;
    auto balls = isolate_roots(q, 96);
    auto ref = oracle::durand_kerner(q);
    REQUIRE(balls.size() == ref.size());
    for (const auto& z : ref)
      CHECK(std::count_if(balls.begin(), balls.end(), [&](const ComplexBall& b) { return contains(b, z, 1e-9L); }) == 1);
  }
}

TEST_CASE("clustered and badly scaled roots") {
  // (10^6 z - 1)(10^6 z - 2)(z - 10^5)(z^2 + 3)
  IntPoly p = poly_mul(poly_mul(P({-1, 1000000}), P({-2, 1000000})), poly_mul(P({-100000, 1}), P({3, 0, 1})));
  auto roots = isolate_roots(p, 64);
  REQUIRE(roots.size() == 5);
  auto factors = factor_squarefree(p, 64);
  CHECK(factors.size() == 4);
}

TEST_CASE("Mahler measure against Jensen's formula") {
  CHECK(compare(log_mahler_measure(P({-2, 0, 1}), 128), eval_constant("log(2)", 128)) == Certainty::Overlap);
  // Lehmer's polynomial.
  IntPoly lehmer = P({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});
  double ref = oracle::jensen_log_mahler(lehmer);
  BallReal m = log_mahler_measure(lehmer, 128);
  // Roots on the unit circle slow the quadrature down.
  CHECK(std::fabs(m.mid_double() - ref) < 1e-3);
  CHECK(std::fabs(m.mid_double() - 0.16235761) < 1e-7);
  IntPoly q = P({3, -7, 0, 5, 2});
  CHECK(std::fabs(log_mahler_measure(q, 128).mid_double() - oracle::jensen_log_mahler(q)) < 1e-8);
}

TEST_CASE("factorization recovers products") {
  IntPoly a = P({-2, 0, 1}), b = P({1, 1, 1}), c = P({-3, 2}), d = P({5, 0, 0, 1});
  IntPoly p = poly_mul(poly_mul(a, b), poly_mul(c, d));
  auto f = factor_squarefree(p, 64);
  REQUIRE(f.size() == 4);
  std::vector<IntPoly> want{a, b, c, d};
  for (const auto& w : want) CHECK(std::find(f.begin(), f.end(), w) != f.end());

  IntPoly irr = P({-1, -1, 0, 0, 0, 1});  // z^5 - z - 1 is irreducible
  CHECK(factor_squarefree(irr, 64).size() == 1);
}

TEST_CASE("binary form factors and roots") {
  IntForm f = parse_form("x0^3*x1 - 2*x0*x1^3", 1);  // x0 x1 (x0^2 - 2 x1^2)
  auto fac = factor_binary_form(f, 64);
  CHECK(fac.size() == 3);
  auto roots = binary_form_roots(f, 64);
  int exact = 0;
  for (const auto& r : roots) exact += r.point.is_exact() ? 1 : 0;
  CHECK(roots.size() == 4);
  CHECK(exact == 2);

  IntForm g = parse_form("x1^2*x0 - x1^3", 1);  // x1^2 (x0 - x1): roots at infinity? no: (1:0) twice, (1:1)
  auto gr = binary_form_roots(g, 64);
  REQUIRE(gr.size() == 2);
  for (const auto& r : gr) {
    if (r.point == ProjectivePoint::exact(std::vector<Integer>{1, 0})) CHECK(r.multiplicity == 2);
    else CHECK(r.point == ProjectivePoint::exact(std::vector<Integer>{1, 1}));
  }
  IntForm h = parse_form("x0^2*x1", 1);  // (0:1) twice and (1:0)
  auto hr = binary_form_roots(h, 64);
  REQUIRE(hr.size() == 2);
  CHECK(std::any_of(hr.begin(), hr.end(), [](const FormRoot& r) {
    return r.point == ProjectivePoint::exact(std::vector<Integer>{0, 1}) && r.multiplicity == 2;
  }));
  CHECK(log_mahler_measure(h, 64).is_exact_zero());
}

TEST_CASE("root norm of rational points matches the FS height") {
  // 3 x1 - 2 x0 vanishes at (3:2); N2 = sqrt(13).
  IntForm f = parse_form("3*x1 - 2*x0", 1);
  BallReal n2 = log_root_norm(f, 128);
  CHECK(compare(n2, fs_height(ProjectivePoint::exact(std::vector<Integer>{3, 2}), 128)) == Certainty::Overlap);
}

TEST_CASE("resultant against the Euclidean recursion") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (int trial = 0; trial < 30; ++trial) {
    IntPoly a, b;
    for (int i = 0; i <= 1 + trial % 4; ++i) a.push_back(Integer(coef(rng)));
    for (int i = 0; i <= 1 + trial % 3; ++i) b.push_back(Integer(coef(rng)));
    a.back() = a.back() == 0 ? Integer(1) : a.back();
    b.back() = b.back() == 0 ? Integer(-2) : b.back();
    CHECK(Rational(resultant(a, b)) == oracle::euclid_resultant(as_rational(a), as_rational(b)));
  }
  CHECK(resultant(P({-2, 0, 1}), P({-2, 0, 1})) == 0);
}

TEST_CASE("elimination of the last variable") {
  // Conic x0 x1 = x2^2 against the line x0 + x1 = 2 x2: tangent at (1:1:1).
  IntForm g = parse_form("x2^2 - x0*x1", 2);
  IntForm f = parse_form("2*x2 - x0 - x1", 2);
  IntForm r = eliminate_last_variable(g, f);
  CHECK(r.degree() == 2);
  CHECK(primitive_part(r) == primitive_part(parse_form("x0^2 - 2*x0*x1 + x1^2", 1)));
  auto [s0, s1] = first_subresultant(parse_form("x2^2 - x0*x1", 2), parse_form("x2^2 + x2*x0 - 2*x1^2", 2));
  // S1 is a multiple of the remainder x0 x2 + x0 x1 - 2 x1^2 after dehomogenizing.
  REQUIRE(s1.size() >= 1);
  // s0 / s1 evaluated at z = 1 (point (1:1:1)) must give x2 = 1.
  Rational v0 = 0, v1 = 0;
  for (size_t i = 0; i < s0.size(); ++i) v0 += Rational(s0[i]);
  for (size_t i = 0; i < s1.size(); ++i) v1 += Rational(s1[i]);
  REQUIRE(v1 != 0);
  CHECK(-v0 / v1 == 1);
}

TEST_CASE("linear substitution") {
  IntForm f = parse_form("x0*x1 - x2^2", 2);
  IntMatrix a{{1, 0, 1}, {0, 1, 2}, {0, 0, 1}};
  IntForm g = substitute_linear(f, a);
  CHECK(g == parse_form("x0*x1 + 2*x0*x2 + x1*x2 + x2^2", 2));
}
