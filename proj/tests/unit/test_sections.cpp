#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "dioph/sections.hpp"

using namespace dioph;

namespace {

// Radical-inverse quasi-random sequence.
double halton(unsigned i, unsigned base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

// Integrates |f|^2 / |x|^(2D) over P^1 with the normalized Fubini-Study
// measure: |x0|^2/|x|^2 = s is uniform on [0,1] and the phase is uniform.
double grid_l2_norm2(const IntForm& f, unsigned points) {
  double sum = 0;
  for (unsigned k = 1; k <= points; ++k) {
    double s = halton(k, 2), phi = 2 * M_PI * halton(k, 3);
    std::complex<double> x0(std::sqrt(s), 0), x1 = std::polar(std::sqrt(1 - s), phi);
    std::complex<double> v = 0;
    for (int i = 0; i <= f.degree(); ++i)
      v += f[i].get_d() * std::pow(x0, f.degree() - i) * std::pow(x1, i);
    sum += std::norm(v);
  }
  return sum / points;
}

IntForm binary(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long x : c) v.emplace_back(x);
  return IntForm(1, static_cast<int>(v.size()) - 1, v);
}

}  // namespace

TEST_CASE("monomial basis ordering and indices") {
  const auto& m = MonomialBasis::list(2, 3);
  CHECK(m.size() == 10);
  for (size_t i = 0; i < m.size(); ++i) CHECK(MonomialBasis::index(m[i]) == i);
  CHECK(MonomialBasis::index({2, 0}) == 0);
  CHECK(MonomialBasis::index({0, 2}) == 2);
}

TEST_CASE("L2 inner product examples") {
  RatForm a = to_rational(monomial_form(1, {2, 0}));
  RatForm b = to_rational(monomial_form(1, {1, 1}));
  CHECK(l2_inner_product(a, a) == Rational(1, 3));
  CHECK(l2_inner_product(a, b) == 0);
  CHECK(l2_norm2(monomial_form(2, {0, 0, 0})) == 1);
}

TEST_CASE("closed-form monomial norms match grid integration") {
  for (int D = 0; D <= 6; ++D) {
    for (int i = 0; i <= D; ++i) {
      IntForm m = monomial_form(1, {D - i, i});
      double exact = l2_norm2(m).get_d();
      double grid = grid_l2_norm2(m, 200000);
      CHECK(std::abs(grid - exact) / exact < 1e-3);
    }
  }
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (int k = 0; k < 20; ++k) {
    IntForm f(1, 1 + k % 5, Integer(0));
    for (auto& c : f.coeffs()) c = coef(rng);
    if (is_zero(f)) continue;
    double exact = l2_norm2(f).get_d();
    CHECK(std::abs(grid_l2_norm2(f, 100000) - exact) / exact < 1e-2);
  }
}

TEST_CASE("evaluation at unit representatives") {
  auto sq2 = PointSpec::parse("(1:sqrt(2))").at(256);
  BallForm f = to_ball(binary({-2, 0, 1}), 256);
  CHECK(evaluate_at_unit(f, sq2, 256).contains_zero());
  ComplexBall v = evaluate_at_unit(binary({0, 1, 0}), parse_exact_point("(1:1)"), 128);
  CHECK(v.re().contains(Rational(1, 2)));
  IntForm x0d = monomial_form(2, {4, 0, 0});
  CHECK(evaluate_at_unit(x0d, parse_exact_point("(1:0:0)"), 64).re().contains(Rational(1)));
  auto th = PointSpec::parse("(1:e:pi)").at(200);
  IntForm g(2, 2, Integer(0)), h(2, 1, Integer(0));
  std::mt19937 rng(5);
  for (auto& c : g.coeffs()) c = static_cast<long>(rng() % 11) - 5;
  for (auto& c : h.coeffs()) c = static_cast<long>(rng() % 11) - 5;
  BallReal lhs = evaluate_at_unit(g * h, th, 200).abs();
  BallReal rhs = evaluate_at_unit(g, th, 200).abs() * evaluate_at_unit(h, th, 200).abs();
  CHECK(compare(lhs, rhs) == Certainty::Overlap);
}

TEST_CASE("gram matrices are symmetric positive definite") {
  for (int t = 1; t <= 2; ++t) {
    for (int D = 0; D <= 8; ++D) {
      SectionSubspace full = orthogonal_complement(zero_subspace(t, D));
      const size_t n = full.dim();
      RatMatrix g(n, RatVector(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g[i][j] = l2_inner_product(full.basis[i], full.basis[j]);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) CHECK(g[i][j] == g[j][i]);
      // Sylvester: all leading minors positive.
      for (size_t k = 1; k <= n; k += std::max<size_t>(1, n / 4)) {
        RatMatrix m(k, RatVector(k));
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j) m[i][j] = g[i][j];
        CHECK(determinant(m) > 0);
      }
    }
  }
}

TEST_CASE("vanishing subspaces") {
  auto a = vanishing_subspace({parse_exact_point("(1:0)")}, 1, 1);
  REQUIRE(a.dim() == 1);
  CHECK(a.basis[0][0] == 0);
  CHECK(a.basis[0][1] != 0);
  auto b = vanishing_subspace({parse_exact_point("(1:0)"), parse_exact_point("(0:1)")}, 1, 2);
  REQUIRE(b.dim() == 1);
  CHECK(b.basis[0][0] == 0);
  CHECK(b.basis[0][2] == 0);
  CHECK(vanishing_subspace(std::vector<ProjectivePoint>{}, 2, 3).dim() == 10);
  // Double point through a form: (x1 - x0)^2 in degree 3.
  auto c = vanishing_subspace(std::vector<IntForm>{binary({1, -2, 1})}, 1, 3);
  CHECK(c.dim() == 2);
}

TEST_CASE("orthogonal projection") {
  auto ideal = vanishing_subspace({parse_exact_point("(1:0)")}, 1, 1);
  RatForm f = to_rational(binary({1, 1}));
  RatForm q = orthogonal_projection(f, ideal);
  CHECK(q == to_rational(binary({1, 0})));
  CHECK(is_zero(orthogonal_projection(ideal.basis[0], ideal)));
  CHECK(orthogonal_projection(f, zero_subspace(1, 1)) == f);
  // Gram-Schmidt oracle on a non-monomial ideal: result orthogonal to ideal and idempotent.
  auto ideal2 = vanishing_subspace(std::vector<IntForm>{binary({-2, 0, 1})}, 1, 3);
  RatForm g = to_rational(binary({3, -1, 4, 1}));
  RatForm pg = orthogonal_projection(g, ideal2);
  for (const auto& b : ideal2.basis) CHECK(l2_inner_product(pg, b) == 0);
  CHECK(orthogonal_projection(pg, ideal2) == pg);
  // Contraction for nested point sets Z in Y.
  auto Z = vanishing_subspace({parse_exact_point("(1:2)")}, 1, 3);
  auto Y = vanishing_subspace({parse_exact_point("(1:2)"), parse_exact_point("(3:-1)")}, 1, 3);
  CHECK(l2_norm2(orthogonal_projection(g, Z)) <= l2_norm2(orthogonal_projection(g, Y)));
  CHECK(l2_norm2(orthogonal_projection(g, Y)) <= l2_norm2(g));
}

TEST_CASE("projected lattices") {
  auto L = projected_lattice(zero_subspace(1, 1));
  CHECK(L.rank() == 2);
  CHECK(L.gram[0][0] == Rational(1, 2));
  CHECK(L.gram[0][1] == 0);
  auto ideal = vanishing_subspace({parse_exact_point("(1:0)")}, 1, 2);
  auto P = projected_lattice(ideal);
  REQUIRE(P.rank() == 1);
  // complement is span{x0^2}; the image of x0^2 is itself.
  CHECK(P.gram[0][0] == Rational(1, 3));
  auto curve = vanishing_subspace(std::vector<IntForm>{binary({-2, 0, 1})}, 1, 4);
  auto C = projected_lattice(curve);
  CHECK(C.rank() == 2);
  for (size_t i = 0; i < C.rank(); ++i) {
    Projector pr(curve);
    CHECK(pr.project(C.representatives[i]) == C.projections[i]);
  }
}

TEST_CASE("form text round trip") {
  IntForm f = parse_int_form("2 1; 0 2 : 1; 2 0 : -2");
  CHECK(f == binary({-2, 0, 1}));
  CHECK(parse_int_form(to_text(f)) == f);
  CHECK(parse_form("x1^2 - 2*x0^2", 1) == f);
  CHECK(to_polynomial_string(f) == "-2*x0^2 + x1^2");
  CHECK_THROWS(parse_form("x1^2 - x0", 1));
  CHECK_THROWS(parse_int_form("2 1; 1 0 : 1"));
  IntForm g = parse_form("x0*x1 - x2^2", 2);
  CHECK(g.degree() == 2);
  CHECK(parse_form(to_polynomial_string(g), 2) == g);
  CHECK(primitive_part(binary({-2, 2})) == binary({1, -1}));
  CHECK_FALSE(is_primitive(binary({2, -2})));
}
