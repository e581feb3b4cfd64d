#include "doctest.h"

#include <random>

#include "dioph/projective.hpp"

using namespace dioph;

namespace {

ProjectivePoint pt(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long x : c) v.emplace_back(x);
  return ProjectivePoint::exact(v);
}

}  // namespace

TEST_CASE("fs_distance spec examples") {
  CHECK(fs_distance(pt({1, 0}), pt({0, 1}), 128).contains(Rational(1)));
  CHECK(fs_distance(pt({1, 0}), pt({1, 0}), 128).is_exact_zero());
  BallReal d = fs_distance(pt({1, 1}), pt({1, 0}), 128);
  // d^2 = 1/2
  CHECK(sqr(d).contains(Rational(1, 2)));
  CHECK(d.lo_double() == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK_THROWS_AS(fs_distance(pt({1, 0}), pt({1, 0, 0}), 64), Error);
}

TEST_CASE("exact points normalize") {
  ProjectivePoint a = pt({-6, -4});
  CHECK(a.integer_coords()[0] == 3);
  CHECK(a.integer_coords()[1] == 2);
  CHECK(parse_exact_point("(1/2:1/3)") == pt({3, 2}));
  CHECK(parse_exact_point("( 0 : -5 )") == pt({0, 1}));
  CHECK_THROWS(parse_exact_point("(0:0)"));
  CHECK_THROWS(parse_exact_point("1:2"));
}

TEST_CASE("naive height examples") {
  CHECK(compare(naive_height(pt({6, 4}), 128), eval_constant("log(3)", 128)) == Certainty::Overlap);
  CHECK(naive_height(pt({1, 0}), 64).is_exact_zero());
  CHECK(naive_height(pt({1, 1, 1}), 64).is_exact_zero());
}

TEST_CASE("unit representatives") {
  auto u = unit_representative(pt({3, 4}), 128);
  CHECK(u[0].re().contains(Rational(3, 5)));
  CHECK(u[1].re().contains(Rational(4, 5)));
  auto v = unit_representative(pt({1, 0}), 128);
  CHECK(v[0].re().contains(Rational(1)));
  CHECK(v[1].re().is_exact_zero());
  auto w = unit_representative(pt({1, 1}), 128);
  CHECK(sqr(w[0].re()).contains(Rational(1, 2)));
  BallReal n2 = w[0].abs2() + w[1].abs2();
  CHECK(n2.contains(Rational(1)));
}

TEST_CASE("triangle inequality and scaling invariance on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coord(-20, 20);
  auto random_point = [&](int t) {
    for (;;) {
      std::vector<Integer> c;
      bool nonzero = false;
      for (int i = 0; i <= t; ++i) {
        c.emplace_back(coord(rng));
        nonzero |= c.back() != 0;
      }
      if (nonzero) return ProjectivePoint::exact(c);
    }
  };
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    int t = 1 + k % 2;
    auto x = random_point(t), y = random_point(t), z = random_point(t);
    BallReal xy = fs_distance(x, y, 128), yz = fs_distance(y, z, 128), xz = fs_distance(x, z, 128);
    if (certainly_lt(xy + yz, xz)) ++failures;
    if (compare(xy, fs_distance(y, x, 128)) != Certainty::Overlap &&
        compare(xy, fs_distance(y, x, 128)) != Certainty::Equal)
      ++failures;
  }
  CHECK(failures == 0);
  ProjectivePoint a = parse_exact_point("(2:3:5)");
  ProjectivePoint b = parse_exact_point("(14/3:7:35/3)");
  CHECK(a == b);
}

TEST_CASE("point expressions") {
  PointSpec s = PointSpec::parse("(1:e)");
  CHECK_FALSE(s.is_exact());
  ProjectivePoint th = s.at(256);
  CHECK(th.precision() >= 256);
  PointSpec r = PointSpec::parse("(2:sqrt(16)/2)");
  CHECK(r.is_exact());
  CHECK(r.at(64) == pt({1, 1}));
  ExprValue v = evaluate_expression("2^10 - 3*(1/2)", 64);
  REQUIRE(v.exact);
  CHECK(*v.exact == Rational(2045, 2));
  ExprValue l = evaluate_expression("liouville", 200);
  CHECK_FALSE(l.exact);
  CHECK(l.ball.re().contains(Rational(110001, 1000000)) == false);
  CHECK(l.ball.re().lo_double() == doctest::Approx(0.110001000000000000000001));
  ExprValue ip = evaluate_expression("i*i", 64);
  CHECK(ip.ball.re().contains(Rational(-1)));
  CHECK_THROWS(evaluate_expression("foo", 64));
  CHECK_THROWS(evaluate_expression("1 +", 64));
}
