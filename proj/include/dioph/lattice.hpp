#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/linalg.hpp"
#include "dioph/sections.hpp"

namespace dioph {

/// A lattice given by its exact Gram matrix and, optionally, integer basis
/// rows in some ambient coordinates.
struct MetricLattice {
  IntMatrix basis;
  RatMatrix gram;

  size_t rank() const { return gram.size(); }
  static MetricLattice from_basis(const IntMatrix& rows);
};

/// -(1/2) log det(gram).
BallReal arithmetic_degree(const MetricLattice& L, Precision p);

struct LllResult {
  MetricLattice reduced;
  /// Row i of the reduced basis is sum_j transform[i][j] * (old row j).
  IntMatrix transform;
  size_t swaps = 0;
};

/// Exact integral LLL on the Gram matrix.
LllResult lll_reduce(const MetricLattice& L, const Rational& delta = Rational(99, 100));
/// Same, on an integer Gram matrix, starting from a given transform.
LllResult lll_reduce_integral(IntMatrix gram, IntMatrix transform, const Rational& delta);

/// Exact check of size reduction (|mu| <= 1/2) and the Lovasz condition.
bool satisfies_lll(const RatMatrix& gram, const Rational& delta);

/// Multipliers 1 <= m_i <= n making every component of sum m_i v_i
/// certifiably nonzero, given v_i[i] certified nonzero.
std::vector<int> nonzero_combination(const std::vector<std::vector<ComplexBall>>& vectors);

struct SearchOptions {
  /// Upper bound on log ||f_Y^perp||_L2 for admissible forms.
  double length_budget = 0;
  /// Optional bound on the absolute values of the representative's coefficients.
  std::optional<Integer> coefficient_box;
  int weight_step_bits = 4;
  Rational delta = Rational(99, 100);
  /// Nominal budgets from the construction being mirrored; only reported.
  std::optional<double> nominal_length_budget;
  std::optional<double> nominal_eval_budget;
};

struct SearchCertificate {
  BallReal log_norm;
  BallReal log_eval;
  ComplexBall eval;
  int weight_bits = 0;
  Precision precision = 0;
  size_t rank = 0;
  size_t weights_tried = 0;
  bool exact_zero = false;
  /// The sweep stopped at the precision ceiling while still improving.
  bool precision_limited = false;
  bool length_budget_met = false;
  std::optional<bool> nominal_length_met;
  std::optional<bool> nominal_eval_met;
  std::optional<double> nominal_length_budget;
  std::optional<double> nominal_eval_budget;
  double length_budget = 0;
};

struct SearchResult {
  IntForm form;
  RatForm projection;
  SearchCertificate certificate;
};

/// Short lattice form with small evaluation at theta: LLL on the lattice
/// augmented by 2^w times the real and imaginary parts of the evaluation
/// functional, sweeping w upward with warm starts. Among all candidates with
/// log-norm within budget the smallest certified evaluation wins; ties go to
/// the smallest w.
SearchResult minkowski_skewed_search(const ProjectedLattice& L, const ProjectivePoint& theta,
                                     Precision p, const SearchOptions& opts);

/// Lemma-style combination over components: f = sum k_i f_i with k_i <= l,
/// where witnesses[i][j] is a value certifying whether f_i is nonzero on
/// component j.
struct CombinedForm {
  IntForm form;
  std::vector<int> multipliers;
};
CombinedForm combine_component_searches(const std::vector<IntForm>& forms,
                                        const std::vector<std::vector<ComplexBall>>& witnesses);

/// log of |z| as a ball; a ball straddling zero gives [-inf, log sup|z|].
BallReal log_abs(const ComplexBall& z);

/// Text dump: "rank n", "basis" rows (possibly none), "gram" rows.
std::string lattice_dump(const MetricLattice& L);
MetricLattice parse_lattice_dump(const std::string& text);

}  // namespace dioph
