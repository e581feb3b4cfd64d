#include "doctest.h"

#include <random>

#include "dioph/cycles.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

ProjectivePoint pt(std::vector<long> c) {
  std::vector<Integer> v(c.begin(), c.end());
  return ProjectivePoint::exact(v);
}

IntForm random_binary(std::mt19937_64& rng, int D, long box) {
  std::uniform_int_distribution<long> coef(-box, box);
  IntForm f(1, D, Integer(0));
  for (auto& c : f.coeffs()) c = coef(rng);
  if (f[0] == 0) f[0] = 1;
  return primitive_part(f);
}

bool overlaps(const BallReal& a, const BallReal& b) { return compare(a, b) == Certainty::Overlap; }

}  // namespace

TEST_CASE("sigma constants") {
  SigmaTable s;
  CHECK(s(0) == 0);
  CHECK(s(1) == Rational(1, 2));
  CHECK(s(2) == Rational(5, 4));
  s.set(1, Rational(3));
  CHECK(s(1) == 3);
  CHECK_FALSE(s.is_standard());
}

TEST_CASE("divisor_of examples") {
  auto x = divisor_of(parse_form("x1 - x0", 1), 128);
  REQUIRE(x.points().size() == 1);
  CHECK(x.points()[0].point == pt({1, 1}));
  CHECK(x.degree() == 1);

  auto y = divisor_of(parse_form("x1^2 - 2*x0^2", 1), 128);
  CHECK(y.degree() == 2);
  REQUIRE(y.points().size() == 2);
  BallReal s2 = eval_constant("sqrt(2)", 128);
  for (const auto& wp : y.points()) {
    auto c = wp.point.ball_coords(128);
    BallReal ratio = abs((c[1] / c[0]).re());
    CHECK(overlaps(ratio, s2));
  }
  CHECK_THROWS_AS(divisor_of(parse_form("2*x1 - 2*x0", 1), 64), Error);
  try {
    divisor_of(parse_form("2*x1 - 2*x0", 1), 64);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPrimitive);
  }
  auto z = divisor_of(parse_form("x0^2*x1", 1), 64);
  CHECK(z.degree() == 3);
}

TEST_CASE("cycle heights") {
  CHECK(cycle_height(divisor_of(parse_form("x1 - x0", 1), 128), 128).is_exact_zero());
  BallReal log2 = eval_constant("log(2)", 128);
  CHECK(overlaps(cycle_height(divisor_of(parse_form("x1^2 - 2*x0^2", 1), 128), 128), log2));
  CHECK(overlaps(cycle_height(divisor_of(parse_form("2*x1 - x0", 1), 128), 128), log2));
  // FS convention: N2 of 2 x1 - x0 is sqrt(5).
  CHECK(overlaps(cycle_height(divisor_of(parse_form("2*x1 - x0", 1), 128), 128, HeightConvention::FubiniStudy),
                 eval_constant("log(5)", 128) * BallReal(Rational(1, 2), 128)));
  CHECK(compare(cycle_height(ambient_cycle(1), 64), BallReal(Rational(1, 2), 64)) == Certainty::Equal);
}

TEST_CASE("Landau inequality: Mahler height below the coefficient norm") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    IntForm f = random_binary(rng, 1 + trial % 5, 30);
    BallReal h = cycle_height(divisor_of(f, 96), 96);
    Rational n2 = 0;
    for (const auto& c : f.coeffs()) n2 += Rational(c * c);
    BallReal bound = ball_log(BallReal(n2, 96)) * BallReal(Rational(1, 2), 96);
    CHECK(compare(h, bound) != Certainty::Greater);
  }
}

TEST_CASE("D_pt examples") {
  auto x = point_cycle({{pt({1, 1}), 1}, {pt({1, -1}), 1}});
  BallReal d = algebraic_distance_points(pt({1, 0}), x, 128);
  CHECK(overlaps(d, -eval_constant("log(2)", 128)));
  CHECK(algebraic_distance_points(pt({1, 1}), x, 64).is_neg_infinity());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto y = divisor_of(random_binary(rng, 3, 9), 96);
    ProjectivePoint theta = pt({static_cast<long>(rng() % 17) + 1, static_cast<long>(rng() % 13) - 6});
    BallReal one = algebraic_distance_points(theta, y, 96);
    BallReal two = algebraic_distance_points(theta, y.scaled(2), 96);
    CHECK(overlaps(two, one * BallReal(2L, 96)));
    CHECK(compare(one, BallReal(0L, 96)) != Certainty::Greater);
  }
}

TEST_CASE("divisor distance is additive over products") {
  std::mt19937_64 rng(9);
  SigmaTable sigma;
  ProjectivePoint theta = PointSpec::parse("(1:e)").at(160);
  for (int trial = 0; trial < 25; ++trial) {
    IntForm f1 = random_binary(rng, 1 + trial % 3, 12), f2 = random_binary(rng, 1 + trial % 4, 12);
    BallReal a = algebraic_distance_divisor(theta, f1 * f2, sigma, 160);
    BallReal b = algebraic_distance_divisor(theta, f1, sigma, 160) + algebraic_distance_divisor(theta, f2, sigma, 160);
    CHECK(overlaps(a, b));
    CHECK(a.rad_log2() < -100);
  }
  CHECK(algebraic_distance_divisor(pt({1, 0}), parse_form("x1", 1), sigma, 64).is_neg_infinity());
}

TEST_CASE("divisor distance versus D_pt") {
  // D_div - D_pt = log N2 - log M, which lies in [0, (deg/2) log 2].
  std::mt19937_64 rng(21);
  SigmaTable sigma;
  ProjectivePoint theta = PointSpec::parse("(1:pi)").at(128);
  for (int trial = 0; trial < 15; ++trial) {
    IntForm f = random_binary(rng, 1 + trial % 4, 20);
    BallReal gap = algebraic_distance_divisor(theta, f, sigma, 128) -
                   algebraic_distance_points(theta, divisor_of(f, 128), 128);
    CHECK(compare(gap, BallReal(0L, 128)) != Certainty::Less);
    BallReal cap = eval_constant("log(2)", 128) * BallReal(Rational(f.degree(), 2), 128);
    CHECK(compare(gap, cap) != Certainty::Greater);
  }
}

TEST_CASE("plane curve intersections") {
  IntForm conic = parse_form("x0*x1 - x2^2", 2);
  auto a = intersect_with_divisor(conic, parse_form("x2", 2), 128);
  CHECK(a.degree() == 2);
  auto pa = a.points();
  REQUIRE(pa.size() == 2);
  bool has100 = false, has010 = false;
  for (const auto& wp : pa) {
    CHECK(wp.multiplicity == 1);
    has100 |= wp.point == pt({1, 0, 0});
    has010 |= wp.point == pt({0, 1, 0});
  }
  CHECK(has100);
  CHECK(has010);

  auto b = intersect_with_divisor(conic, parse_form("x0 + x1 - 2*x2", 2), 128);
  auto pb = b.points();
  REQUIRE(pb.size() == 1);
  CHECK(pb[0].multiplicity == 2);
  CHECK(pb[0].point == pt({1, 1, 1}));

  try {
    intersect_with_divisor(conic, conic, 64);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ImproperIntersection);
  }
  auto lines = intersect_with_divisor(parse_form("x0 - x1", 2), parse_form("x2 - x1", 2), 64);
  CHECK(lines.points()[0].point == pt({1, 1, 1}));
}

TEST_CASE("Bezout count on random proper intersections") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> coef(-4, 4);
  int done = 0;
  for (int trial = 0; trial < 12; ++trial) {
    IntForm g(2, 2 + trial % 2, Integer(0)), f(2, 1 + trial % 3, Integer(0));
    for (auto& c : g.coeffs()) c = coef(rng);
    for (auto& c : f.coeffs()) c = coef(rng);
    if (is_zero(g) || is_zero(f)) continue;
    g = primitive_part(g);
    try {
      auto x = intersect_with_divisor(g, f, 128);
      CHECK(x.degree() == g.degree() * f.degree());
      // Every point lies on both curves.
      for (const auto& wp : x.points()) {
        CHECK(evaluate_at_unit(g, wp.point, 128).contains_zero());
        CHECK(evaluate_at_unit(f, wp.point, 128).contains_zero());
      }
      ++done;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ImproperIntersection);
    }
  }
  CHECK(done >= 8);
}

TEST_CASE("cycle literals") {
  auto x = parse_cycle("points[(1:1)*2, (1:-1)]", 1, 64);
  CHECK(x.degree() == 3);
  CHECK(x.to_string() == "points[(1:1)*2, (1:-1)]");
  auto d = parse_cycle("div(x1^2 - 2*x0^2)", 1, 64);
  CHECK(d.degree() == 2);
  auto c = parse_cycle("curve(x0*x1 - x2^2)", 2, 64);
  CHECK(c.degree() == 2);
  CHECK(c.dim() == 1);
  CHECK_THROWS_AS(parse_cycle("blob(x)", 1, 64), Error);
  CHECK(cycle_height(parse_cycle("points[(3:4)]", 1, 64), 64).mid_double() == doctest::Approx(std::log(4.0)));
}
