#include "doctest.h"

#include <random>

#include "dioph/lattice.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

IntMatrix random_unimodular(size_t n, std::mt19937_64& rng) {
  IntMatrix u = identity_matrix(n);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1), coef(-3, 3);
  for (int step = 0; step < 6 * static_cast<int>(n); ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    int c = coef(rng);
    for (size_t k = 0; k < n; ++k) u[i][k] += c * u[j][k];
  }
  return u;
}

}  // namespace

TEST_CASE("arithmetic degree examples") {
  MetricLattice a;
  a.gram = {{Rational(4)}};
  CHECK(compare(arithmetic_degree(a, 128), -eval_constant("log(2)", 128)) == Certainty::Overlap);
  MetricLattice b = MetricLattice::from_basis({{1, 0}, {0, 1}});
  CHECK(arithmetic_degree(b, 64).is_exact_zero());
  MetricLattice c;
  c.gram = {{Rational(2), Rational(0)}, {Rational(0), Rational(2)}};
  CHECK(compare(arithmetic_degree(c, 128), -eval_constant("log(2)", 128)) == Certainty::Overlap);
  MetricLattice s;
  s.gram = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
  CHECK_THROWS_AS(arithmetic_degree(s, 64), Error);
}

TEST_CASE("LLL examples") {
  auto id = lll_reduce(MetricLattice::from_basis({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(id.transform == identity_matrix(3));
  auto r = lll_reduce(MetricLattice::from_basis({{12, 2}, {13, 4}}));
  CHECK(r.reduced.gram[0][0] == 5);
  CHECK(((r.reduced.basis[0] == IntVector{1, 2}) || (r.reduced.basis[0] == IntVector{-1, -2})));
  CHECK(oracle::shortest_vector_norm2(MetricLattice::from_basis({{12, 2}, {13, 4}}).gram) == 5);
  std::mt19937_64 rng(11);
  IntMatrix u = random_unimodular(5, rng);
  auto s = lll_reduce(MetricLattice::from_basis(u));
  CHECK(s.reduced.gram[0][0] == 1);
  CHECK_THROWS_AS(lll_reduce(MetricLattice::from_basis({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("LLL on random lattices against the enumeration oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> coef(-50, 50);
  const Rational delta(99, 100);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = 2 + trial % 5;
    IntMatrix b(n, IntVector(n));
    for (auto& row : b)
      for (auto& x : row) x = coef(rng);
    MetricLattice L = MetricLattice::from_basis(b);
    if (determinant(L.gram) == 0) continue;
    auto r = lll_reduce(L, delta);
    CHECK(satisfies_lll(r.reduced.gram, delta));
    CHECK(determinant(r.reduced.gram) == determinant(L.gram));
    CHECK(::abs(bareiss_determinant(r.transform)) == 1);
    Rational sv = oracle::shortest_vector_norm2(L.gram);
    // |b1|^2 <= 2^(n-1) * lambda_1^2
    CHECK(r.reduced.gram[0][0] <= Rational(Integer(1) << (n - 1)) * sv);
  }
}

TEST_CASE("nonzero combination examples") {
  auto c = [](long re) { return ComplexBall(BallReal(re, 64)); };
  CHECK(nonzero_combination({{c(5)}}) == std::vector<int>{1});
  CHECK(nonzero_combination({{c(1), c(0)}, {c(0), c(1)}}) == std::vector<int>{1, 1});
  CHECK(nonzero_combination({{c(1), c(-1)}, {c(1), c(1)}}) == std::vector<int>{1, 2});
  CHECK_THROWS(nonzero_combination({{c(0), c(1)}, {c(1), c(1)}}));
  // exhaustive check of the lemma on small random integer instances
  std::mt19937 rng(9);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + trial % 3;
    std::vector<std::vector<ComplexBall>> v(n, std::vector<ComplexBall>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        long x = d(rng);
        if (i == j && x == 0) x = 1;
        v[i][j] = c(x);
      }
    auto m = nonzero_combination(v);
    for (size_t j = 0; j < n; ++j) {
      long s = 0;
      for (size_t i = 0; i < n; ++i) {
        CHECK(m[i] >= 1);
        CHECK(m[i] <= static_cast<int>(n));
        s += m[i] * v[i][j].re().lo_double();
      }
      CHECK(s != 0);
    }
  }
}

TEST_CASE("skewed search finds annihilating forms") {
  auto lat = projected_lattice(zero_subspace(1, 2));
  SearchOptions opts;
  opts.length_budget = std::log(10.0);
  opts.coefficient_box = Integer(10);
  auto sq2 = PointSpec::parse("(1:sqrt(2))").at(256);
  auto r = minkowski_skewed_search(lat, sq2, 256, opts);
  CHECK(r.form == parse_form("2*x0^2 - x1^2", 1));
  CHECK(r.certificate.eval.contains_zero());
  auto lat1 = projected_lattice(zero_subspace(1, 1));
  auto r1 = minkowski_skewed_search(lat1, parse_exact_point("(1:0)"), 128, opts);
  CHECK(r1.certificate.exact_zero);
  CHECK(r1.form == parse_form("x1", 1));
  CHECK(r1.certificate.log_eval.is_neg_infinity());
}

TEST_CASE("search is deterministic and respects its budget") {
  auto lat = projected_lattice(zero_subspace(1, 3));
  auto th = PointSpec::parse("(1:e)").at(256);
  SearchOptions opts;
  opts.length_budget = 4.0;
  auto a = minkowski_skewed_search(lat, th, 256, opts);
  auto b = minkowski_skewed_search(lat, th, 256, opts);
  CHECK(a.form == b.form);
  CHECK(to_hex(a.certificate.log_eval) ==
        to_hex(b.certificate.log_eval));
  CHECK(a.certificate.length_budget_met);
  CHECK(certainly_le(a.certificate.log_norm, BallReal::from_double(4.0, 256)));
  CHECK(a.certificate.log_eval.hi_double() < -5);
}

TEST_CASE("lattice dump round trip") {
  MetricLattice L = MetricLattice::from_basis({{1, 2, 3}, {4, 5, 6}});
  L.gram[0][1] = L.gram[1][0] = Rational(1, 3);
  MetricLattice back = parse_lattice_dump(lattice_dump(L));
  CHECK(back.basis == L.basis);
  CHECK(back.gram == L.gram);
}
