#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/checkers.hpp"
#include "dioph/cycles.hpp"
#include "dioph/lattice.hpp"
#include "dioph/projective.hpp"

namespace dioph {

/// Constants borrowed from the arithmetic Hilbert and metric Bezout bounds.
struct Calibration {
  long m = 2;
  Rational c1 = 1, c2 = 1, d = 1;
};

/// a = max(10, c2 2^{t+1} t!).
Rational default_a(int t, const Calibration& cal);

/// The constants of the approximation-cycle construction, in exact rational
/// arithmetic. Sequences are indexed by s = 1..t; nbar(t+1) uses the same
/// closed form so that mbar(t) is defined, and mbar(0) = nbar(1) + 9 sizes
/// the ambient space.
struct ConstantTable {
  int t = 1;
  long N = 1;
  Rational a;
  Calibration cal;
  SigmaTable sigma;
  std::vector<Rational> nbar_, n_, a_, mbar_, m_, bbar_, b_;
  Integer n_big;
  /// b-bar of the approximation triple.
  Rational bbar_triple;

  const Rational& nbar(int s) const { return nbar_.at(s); }
  const Rational& n(int s) const { return n_.at(s); }
  const Rational& as(int s) const { return a_.at(s); }
  const Rational& mbar(int s) const { return mbar_.at(s); }
  const Rational& m(int s) const { return m_.at(s); }
  const Rational& bbar(int s) const { return bbar_.at(s); }
  const Rational& b(int s) const { return b_.at(s); }

  /// (name, exact value) rows: nbar_s, n_s, a_s, mbar_s, m_s, bbar_s, b_s, n.
  NamedValues rows() const;
};

ConstantTable build_constants(int t, long N, const Rational& a, const Calibration& cal = {});

/// t_a(X) = a deg X + h(X).
BallReal a_size(const EffectiveCycle& x, const Rational& a, Precision p, const SigmaTable& sigma = {});

/// D(theta, X): D_pt for 0-cycles, the divisor formula for curves and
/// divisors given by one form, 0 for P^t.
BallReal algebraic_distance(const ProjectivePoint& theta, const EffectiveCycle& x,
                            const SigmaTable& sigma, Precision p);

/// phi = D(theta, X) / t_a(X).
BallReal weighted_distance(const ProjectivePoint& theta, const EffectiveCycle& x, const Rational& a,
                           Precision p, const SigmaTable& sigma = {});

struct CycleCheck {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<Inequality> parts;
  /// Throws IndeterminateComparison when the verdict is undecided.
  bool holds() const;
};

/// deg X <= n_s D^s, h(X) <= a_s D^s, phi(X) <= -b_s D^{t+1-s}, s = codim X.
CycleCheck is_approximation_cycle(const ProjectivePoint& theta, const EffectiveCycle& x, int D,
                                  const ConstantTable& table, Precision p);

/// t_a(X) m_r D^{dim X} for X of codimension r.
BallReal dimensional_size(const EffectiveCycle& x, int D, const ConstantTable& table, Precision p);

struct ChainStep {
  int codim = 0;
  /// "start", "case 1", "case 2a" or "case 2b".
  std::string branch;
  IntForm section;
  EffectiveCycle cycle;
  long degree = 0;
  bool degree_within = false;
  BallReal height;
  BallReal a_size;
  BallReal distance;
  BallReal log_distance;
  BallReal size;
  bool size_decrease = false;
  SearchCertificate certificate;
};

struct ApproximationChain {
  int t = 1;
  int D = 0;
  Precision precision = 0;
  std::vector<ChainStep> steps;
  /// End term; for 0-cycles the selected irreducible component.
  EffectiveCycle end;
  CycleCheck end_check;
  ProjectivePoint closest;
  BallReal log_distance;

  /// Cycles of the chain, ambient space first.
  std::vector<EffectiveCycle> cycles() const;
  /// The chain cut after its first k steps.
  ApproximationChain truncated(size_t k) const;
};

struct EngineOptions {
  PrecisionPolicy policy{512, 1 << 14};
  /// Smallest weight step of the lattice sweep; at p bits the step is at
  /// least p / 128.
  int weight_step_bits = 4;
  std::optional<Integer> coefficient_box;
};

/// Successive intersection from P^t (t <= 2) down to a 0-cycle. Each step
/// takes a short form of degree nbar_s D modulo I_Y with small value at
/// theta, with log-length budget (a - sigma_t) nbar_s D, and keeps the
/// component of smallest weighted distance.
ApproximationChain search_approximation_chain(const PointSpec& theta, int D, const ConstantTable& table,
                                              const EngineOptions& opts = {});

/// Single-step relation: the end term of `a` has certified smaller
/// dimensional size and either `a` extends `b` by one step or the end term
/// of `a` occurs in the chain of `b`.
bool chain_precedes(const ApproximationChain& a, const ApproximationChain& b, const ConstantTable& table,
                    Precision p);

/// Transitive closure of chain_precedes over a finite set: closure[i][j]
/// iff chains[i] precedes chains[j].
std::vector<std::vector<bool>> precedence_closure(const std::vector<ApproximationChain>& chains,
                                                  const ConstantTable& table, Precision p);

struct ApproximationTriple {
  IntForm f;
  BallForm fbar;
  EffectiveCycle y;
  int D = 0;
};

struct TripleReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<Inequality> parts;
  /// log |Y,theta| <= -b t_a(Y) Dbar for the supplied b.
  Inequality conclusion;
  Rational dbar;
};

/// Checks, with Dbar = n D:
///   D(Y,theta) <= -b_t t_a(Y) Dbar,  log |f_Y^perp| <= 6 a nbar_t D,
///   log |<fbar|theta>| <= -(bbar / n^{6t}) t_a(Y) D,  t_a(Y) <= (a_t + a n_t) Dbar^t.
/// fbar must agree with f on the points of Y and f_Y^perp must be nonzero,
/// otherwise ProjectionMismatch.
TripleReport verify_triple(const ApproximationTriple& triple, const ProjectivePoint& theta,
                           const ConstantTable& table, const Rational& b, Precision p);

/// Triple from a t = 1 chain: Y its end term, f the short form of degree D
/// modulo I_Y with small value at theta, fbar = f.
ApproximationTriple triple_from_chain(const ApproximationChain& chain, const PointSpec& theta,
                                      const ConstantTable& table, const EngineOptions& opts = {});

struct ScalingRow {
  int D = 0;
  long degree = 0;
  BallReal height;
  BallReal log_distance;
  Precision precision = 0;
  bool completed = false;
  std::string error;
  double fit_residual = 0;
};

struct ScalingExperiment {
  std::vector<ScalingRow> rows;
  std::vector<ApproximationChain> chains;
  /// Least squares of log(-log |alpha_D,theta|) against log D.
  double exponent = 0;
  double intercept = 0;
  /// Every cycle X_D through alpha_D satisfies |X_D,theta| <= |alpha_D,theta|;
  /// one line per completed D.
  std::vector<std::string> transfer;
};

ScalingExperiment main_theorem_experiment(const PointSpec& theta, const std::vector<int>& degrees,
                                          const ConstantTable& table, const EngineOptions& opts = {});

}  // namespace dioph
