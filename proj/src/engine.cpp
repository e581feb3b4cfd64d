#include "dioph/engine.hpp"

#include <algorithm>
#include <cmath>

#include "dioph/sections.hpp"

namespace dioph {

namespace {

Rational rpow(const Rational& x, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= x;
  return r;
}

Integer floor_of(const Rational& q) {
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return n;
}

BallReal ball(const Rational& q, Precision p) { return BallReal(q, p); }

}  // namespace

Rational default_a(int t, const Calibration& cal) {
  Rational v = cal.c2 * Rational((Integer(1) << (t + 1)) * factorial(t));
  return std::max(Rational(10), v);
}

ConstantTable build_constants(int t, long N, const Rational& a, const Calibration& cal) {
  if (t < 1) fail(ErrorKind::InvalidCalibration, "t must be at least 1");
  if (N < 1) fail(ErrorKind::InvalidCalibration, "N must be at least 1");
  if (a <= 0) fail(ErrorKind::InvalidCalibration, "a must be positive");
  if (cal.m < 2) fail(ErrorKind::InvalidCalibration, "m must be at least 2");
  if (cal.c1 <= 0 || cal.c2 <= 0 || cal.d <= 0)
    fail(ErrorKind::InvalidCalibration, "calibration constants must be positive");
  ConstantTable T;
  T.t = t;
  T.N = N;
  T.a = a;
  T.cal = cal;
  const Rational m(cal.m);
  T.nbar_.assign(t + 2, Rational(0));
  T.nbar_[0] = 1;
  T.nbar_[1] = 1;
  for (int s = 2; s <= t + 1; ++s) T.nbar_[s] = Rational(N) * m * rpow(2 * (1 + m), s - 2);

  T.n_.assign(t + 1, Rational(0));
  T.a_.assign(t + 1, Rational(0));
  T.n_[1] = T.nbar_[1];
  T.a_[1] = a;
  for (int s = 1; s < t; ++s) {
    T.n_[s + 1] = T.nbar_[s + 1] * T.n_[s];
    T.a_[s + 1] = 6 * a * T.nbar_[s + 1] * T.n_[s] + T.a_[s] * T.nbar_[s + 1] + cal.d * T.n_[s] * T.nbar_[s + 1];
  }

  T.mbar_.assign(t + 1, Rational(0));
  T.m_.assign(t + 1, Rational(0));
  for (int s = 0; s <= t; ++s) T.mbar_[s] = T.nbar_[s + 1] + 8 * T.nbar_[s] + 1;
  for (int s = t; s >= 0; --s) T.m_[s] = T.mbar_[s] * (s < t ? T.m_[s + 1] : Rational(1));

  const Rational Nt = rpow(Rational(N), t);
  T.bbar_.assign(t + 1, Rational(0));
  T.b_.assign(t + 1, Rational(0));
  T.bbar_[1] = Nt / Rational(factorial(t));
  for (int s = 2; s <= t; ++s)
    T.bbar_[s] = Nt * std::min(Rational(Rational(1) / Rational((Integer(1) << (t + 1)) * factorial(t - s))), cal.c1);
  T.b_[1] = T.bbar_[1];
  for (int s = 2; s <= t; ++s) {
    Rational v = T.b_[s - 1] / (16 * T.nbar_[s]);
    for (int r = 1; r < s; ++r) v = std::min(v, Rational(T.bbar_[r] * T.m_[s] * T.a_[r] / (T.m_[r] * T.a_[s])));
    T.b_[s] = v;
  }
  T.n_big = floor_of(8 * T.nbar_[t] / T.b_[t]) + 1;
  T.bbar_triple = T.b_[t] / 100;
  return T;
}

NamedValues ConstantTable::rows() const {
  NamedValues out = {{"t", std::to_string(t)}, {"N", std::to_string(N)}, {"a", rational_text(a)},
                     {"m", std::to_string(cal.m)}, {"c1", rational_text(cal.c1)},
                     {"c2", rational_text(cal.c2)}, {"d", rational_text(cal.d)}};
  auto seq = [&](const std::string& name, const std::vector<Rational>& v, int from, int to) {
    for (int s = from; s <= to; ++s) out.push_back({name + "_" + std::to_string(s), rational_text(v[s])});
  };
  seq("nbar", nbar_, 0, t + 1);
  seq("n", n_, 1, t);
  seq("a", a_, 1, t);
  seq("mbar", mbar_, 0, t);
  seq("m", m_, 0, t);
  seq("bbar", bbar_, 1, t);
  seq("b", b_, 1, t);
  out.push_back({"n", n_big.get_str()});
  out.push_back({"bbar_triple", rational_text(bbar_triple)});
  for (int s = 0; s <= t; ++s) out.push_back({"sigma_" + std::to_string(s), rational_text(sigma(s))});
  return out;
}

BallReal a_size(const EffectiveCycle& x, const Rational& a, Precision p, const SigmaTable& sigma) {
  return BallReal(a * x.degree(), p) + cycle_height(x, p, HeightConvention::Mahler, sigma);
}

BallReal algebraic_distance(const ProjectivePoint& theta, const EffectiveCycle& x, const SigmaTable& sigma,
                            Precision p) {
  if (x.codim() == 0) return BallReal(0L, p);
  if (x.is_zero_cycle()) return algebraic_distance_points(theta, x, p);
  BallReal acc(0L, p);
  for (const auto& c : x.components()) {
    if (!c.form) fail(ErrorKind::UnsupportedCycle, "divisor component without a form");
    acc += algebraic_distance_divisor(theta, *c.form, sigma, p) * BallReal(static_cast<long>(c.multiplicity), p);
  }
  return acc;
}

BallReal weighted_distance(const ProjectivePoint& theta, const EffectiveCycle& x, const Rational& a, Precision p,
                           const SigmaTable& sigma) {
  BallReal ta = a_size(x, a, p, sigma);
  if (!ta.is_positive()) fail(ErrorKind::ZeroSize, "a-size is not positive");
  BallReal d = algebraic_distance(theta, x, sigma, p);
  if (d.is_neg_infinity()) return d;
  return d / ta;
}

bool CycleCheck::holds() const {
  if (verdict == Verdict::Indeterminate)
    fail(ErrorKind::IndeterminateComparison, "approximation-cycle inequalities undecided");
  return verdict == Verdict::Holds;
}

CycleCheck is_approximation_cycle(const ProjectivePoint& theta, const EffectiveCycle& x, int D,
                                  const ConstantTable& table, Precision p) {
  const int s = x.codim(), t = table.t;
  if (s < 1 || s > t) fail(ErrorKind::DomainError, "codimension outside 1..t");
  if (x.t() != t) fail(ErrorKind::DimensionMismatch, "cycle and table differ in t");
  const Rational Ds = rpow(Rational(D), s);
  CycleCheck out;
  const long deg = x.degree();
  const Rational deg_bound = table.n(s) * Ds;
  out.parts.push_back(exact_inequality("deg X <= n_s D^s", BallReal(deg, p), ball(deg_bound, p),
                                       ball(deg_bound - deg, p), deg <= deg_bound));
  BallReal h = cycle_height(x, p, HeightConvention::Mahler, table.sigma);
  out.parts.push_back(make_inequality("h(X) <= a_s D^s", h, ball(table.as(s) * Ds, p)));
  BallReal phi = weighted_distance(theta, x, table.a, p, table.sigma);
  out.parts.push_back(
      make_inequality("phi(X) <= -b_s D^(t+1-s)", phi, ball(-table.b(s) * rpow(Rational(D), t + 1 - s), p)));
  out.verdict = Verdict::Holds;
  for (const auto& q : out.parts) out.verdict = worst(out.verdict, q.verdict);
  return out;
}

BallReal dimensional_size(const EffectiveCycle& x, int D, const ConstantTable& table, Precision p) {
  const int r = x.codim();
  return a_size(x, table.a, p, table.sigma) * ball(table.m(r) * rpow(Rational(D), x.dim()), p);
}

std::vector<EffectiveCycle> ApproximationChain::cycles() const {
  std::vector<EffectiveCycle> out{ambient_cycle(t)};
  for (const auto& s : steps) out.push_back(s.cycle);
  return out;
}

ApproximationChain ApproximationChain::truncated(size_t k) const {
  ApproximationChain c = *this;
  c.steps.resize(std::min(k, steps.size()));
  c.end = c.steps.empty() ? ambient_cycle(t) : c.steps.back().cycle;
  return c;
}

namespace {

struct StepSearch {
  SearchResult result;
  Precision precision;
  ProjectivePoint theta;
};

// Lattice search at increasing precision until the value at theta is
// certified nonzero and either the nominal evaluation budget is met or the
// weight sweep was not cut short by precision.
StepSearch search_step(const ProjectedLattice& L, const PointSpec& theta, Precision start, double budget,
                       double nominal_length, double nominal_eval, const EngineOptions& opts) {
  if (L.rank() == 0) fail(ErrorKind::SearchStalled, "no sections left modulo the ideal");
  SearchOptions so;
  so.length_budget = budget;
  so.coefficient_box = opts.coefficient_box;
  so.nominal_length_budget = nominal_length;
  so.nominal_eval_budget = nominal_eval;
  std::optional<IntForm> straddled;
  for (Precision p = start;; p *= 2) {
    ProjectivePoint th = theta.at(p);
    so.weight_step_bits = std::max<int>(opts.weight_step_bits, static_cast<int>(p / 128));
    SearchResult r = minkowski_skewed_search(L, th, p, so);
    if (r.certificate.exact_zero)
      fail(ErrorKind::ThetaNotGeneric, to_polynomial_string(r.form) + " vanishes at theta");
    const bool straddles = r.certificate.eval.contains_zero();
    if (straddles) {
      if (straddled && *straddled == r.form)
        fail(ErrorKind::ThetaNotGeneric,
             to_polynomial_string(r.form) + " is not separated from zero at " + std::to_string(p) + " bits");
      straddled = r.form;
    } else {
      straddled.reset();
    }
    const bool met = r.certificate.nominal_eval_met.value_or(false);
    const bool more = straddles || (r.certificate.precision_limited && !met);
    if (!more) return {std::move(r), p, std::move(th)};
    if (p * 2 > opts.policy.cap) {
      if (straddles)
        fail(ErrorKind::PrecisionExhausted, "value at theta not separated from zero at " + std::to_string(p) + " bits");
      return {std::move(r), p, std::move(th)};
    }
  }
}

// Irreducible pieces of a 0-cycle as reduced cycles.
std::vector<EffectiveCycle> reduced_components(const EffectiveCycle& x) {
  std::vector<EffectiveCycle> out;
  for (auto c : x.components()) {
    for (auto& wp : c.points) wp.multiplicity = 1;
    c.multiplicity = 1;
    EffectiveCycle y(x.t(), x.codim());
    y.add(std::move(c));
    out.push_back(std::move(y));
  }
  return out;
}

// Smallest weighted distance, then smaller a-size, then the literal.
EffectiveCycle select_component(const std::vector<EffectiveCycle>& comps, const ProjectivePoint& theta,
                                const ConstantTable& table, Precision p) {
  if (comps.empty()) fail(ErrorKind::SearchStalled, "empty intersection");
  struct Key {
    double phi, ta;
    std::string text;
  };
  std::vector<Key> keys;
  for (const auto& c : comps) {
    BallReal phi = weighted_distance(theta, c, table.a, p, table.sigma);
    keys.push_back({phi.is_neg_infinity() ? -HUGE_VAL : phi.mid_double(),
                    a_size(c, table.a, p, table.sigma).mid_double(), c.to_string()});
  }
  size_t best = 0;
  for (size_t i = 1; i < comps.size(); ++i) {
    const Key &k = keys[i], &b = keys[best];
    if (std::tie(k.phi, k.ta, k.text) < std::tie(b.phi, b.ta, b.text)) best = i;
  }
  return comps[best];
}

BallReal log_distance_to(const ProjectivePoint& theta, const EffectiveCycle& x, Precision p) {
  if (x.is_zero_cycle()) {
    BallReal d = min_distance(theta, x, p);
    return d.is_exact_zero() ? BallReal::neg_infinity(p) : log_abs(ComplexBall(d));
  }
  const auto& c = x.components().front();
  BallReal d = curve_distance_surrogate(*c.form, theta, p);
  return d.is_exact_zero() ? BallReal::neg_infinity(p) : log_abs(ComplexBall(d));
}

ChainStep make_step(const ProjectivePoint& theta, int D, const ConstantTable& table, Precision p,
                    const EffectiveCycle& cycle, const IntForm& section, const SearchCertificate& cert,
                    const BallReal& previous_size, std::string branch) {
  ChainStep s;
  s.codim = cycle.codim();
  s.branch = std::move(branch);
  s.section = section;
  s.cycle = cycle;
  s.degree = cycle.degree();
  s.degree_within = Rational(s.degree) <= table.n(s.codim) * rpow(Rational(D), s.codim);
  s.height = cycle_height(cycle, p, HeightConvention::Mahler, table.sigma);
  s.a_size = a_size(cycle, table.a, p, table.sigma);
  s.distance = algebraic_distance(theta, cycle, table.sigma, p);
  s.log_distance = log_distance_to(theta, cycle, p);
  s.size = dimensional_size(cycle, D, table, p);
  s.size_decrease = certainly_lt(s.size, previous_size);
  s.certificate = cert;
  if (!s.size_decrease)
    fail(ErrorKind::SearchStalled, "dimensional size did not decrease at codimension " + std::to_string(s.codim) +
                                       ": " + s.size.to_string(12) + " vs " + previous_size.to_string(12));
  return s;
}

double budget_for(const ConstantTable& table, int s, int D) {
  return Rational((table.a - table.sigma(table.t)) * table.nbar(s) * D).get_d();
}

// Lemma-style nominal budgets: length 6 a nbar_s D, evaluation
// -bbar_s t_a(X) D^{dim X + 1}.
std::pair<double, double> nominal_for(const ConstantTable& table, int s, int D, const BallReal& ta, int dim) {
  double len = Rational(6 * table.a * table.nbar(s) * D).get_d();
  double ev = -table.bbar(s).get_d() * ta.mid_double() * std::pow(D, dim + 1);
  return {len, ev};
}

}  // namespace

ApproximationChain search_approximation_chain(const PointSpec& theta_spec, int D, const ConstantTable& table,
                                              const EngineOptions& opts) {
  const int t = table.t;
  if (t < 1 || t > 2) fail(ErrorKind::UnsupportedCycle, "the search is implemented for t <= 2");
  if (theta_spec.dim() != t) fail(ErrorKind::DimensionMismatch, "theta outside P^t");
  if (D < 1) fail(ErrorKind::DomainError, "D must be positive");
  ApproximationChain chain;
  chain.t = t;
  chain.D = D;

  const EffectiveCycle ambient = ambient_cycle(t);
  Precision p = opts.policy.start;
  const int deg1 = static_cast<int>(Rational(table.nbar(1) * D).get_d());
  ProjectedLattice L1 = projected_lattice(zero_subspace(t, deg1));
  BallReal amb_ta = a_size(ambient, table.a, p, table.sigma);
  auto [len1, ev1] = nominal_for(table, 1, D, amb_ta, t);
  StepSearch s1 = search_step(L1, theta_spec, p, budget_for(table, 1, D), len1, ev1, opts);
  p = s1.precision;
  ProjectivePoint theta = s1.theta;
  IntForm f1 = primitive_part(s1.result.form);
  BallReal ambient_size = dimensional_size(ambient, D, table, p);

  if (t == 1) {
    EffectiveCycle div = divisor_of(f1, p);
    EffectiveCycle y1 = select_component(reduced_components(div), theta, table, p);
    chain.steps.push_back(make_step(theta, D, table, p, y1, f1, s1.result.certificate, ambient_size, "start"));
  } else {
    EffectiveCycle y1 = curve_of(f1);
    chain.steps.push_back(make_step(theta, D, table, p, y1, f1, s1.result.certificate, ambient_size, "start"));
    const ChainStep& prev = chain.steps.back();

    const int deg2 = static_cast<int>(Rational(table.nbar(2) * D).get_d());
    ProjectedLattice L2 = projected_lattice(vanishing_subspace(std::vector<IntForm>{f1}, 2, deg2));
    auto [len2, ev2] = nominal_for(table, 2, D, prev.a_size, 1);
    StepSearch s2 = search_step(L2, theta_spec, p, budget_for(table, 2, D), len2, ev2, opts);
    if (s2.precision != p) {
      p = s2.precision;
      theta = s2.theta;
    }
    IntForm f2 = primitive_part(s2.result.form);

    // Case analysis with X = Y (the curve is its own complete intersection).
    std::string branch;
    Certainty order = Certainty::Overlap;
    for (Precision q = p; q <= opts.policy.cap && order == Certainty::Overlap; q *= 2) {
      ProjectivePoint th = q == p ? theta : theta_spec.at(q);
      order = compare(curve_distance_surrogate(f2, th, q), curve_distance_surrogate(f1, th, q));
    }
    switch (order) {
      case Certainty::Less:
      case Certainty::Equal:
        branch = "case 1";
        break;
      case Certainty::Greater: {
        const int s = 1, r = 1;
        BallReal lhs = a_size(y1, table.a, p, table.sigma);
        BallReal rhs = ball(2 * table.bbar(r) / table.b(s) * rpow(Rational(D), s - r), p) * lhs;
        branch = certainly_le(lhs, rhs) ? "case 2a" : "case 2b";
        break;
      }
      case Certainty::Overlap:
        fail(ErrorKind::IndeterminateBranch, "cannot order |div f,theta| and |Y,theta|");
    }
    EffectiveCycle yz;
    try {
      yz = intersect_with_divisor(f1, f2, p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImproperIntersection) throw;
      fail(ErrorKind::SearchStalled, std::string("second section meets the curve improperly: ") + e.what());
    }
    EffectiveCycle y2 = select_component(reduced_components(yz), theta, table, p);
    chain.steps.push_back(make_step(theta, D, table, p, y2, f2, s2.result.certificate, prev.size, branch));
  }

  chain.precision = p;
  chain.end = chain.steps.back().cycle;
  chain.end_check = is_approximation_cycle(theta, chain.end, D, table, p);
  auto pts = chain.end.points();
  size_t best = 0;
  std::vector<BallReal> d;
  for (const auto& wp : pts) d.push_back(fs_distance(theta, wp.point, p));
  for (size_t i = 1; i < d.size(); ++i)
    if (d[i].mid_double() < d[best].mid_double()) best = i;
  chain.closest = pts[best].point;
  chain.log_distance = d[best].is_exact_zero() ? BallReal::neg_infinity(p) : log_abs(ComplexBall(d[best]));
  return chain;
}

bool chain_precedes(const ApproximationChain& a, const ApproximationChain& b, const ConstantTable& table,
                    Precision p) {
  if (a.D != b.D || a.t != b.t) fail(ErrorKind::DomainError, "chains of different order");
  auto ca = a.cycles(), cb = b.cycles();
  bool related = ca.size() == cb.size() + 1;
  for (size_t i = 0; related && i < cb.size(); ++i) related = ca[i].to_string() == cb[i].to_string();
  const std::string end = a.end.to_string();
  for (size_t i = 0; !related && i + 1 < cb.size(); ++i) related = cb[i].to_string() == end;
  if (!related) return false;
  Certainty c = compare(dimensional_size(a.end, a.D, table, p), dimensional_size(b.end, b.D, table, p));
  if (c == Certainty::Overlap) fail(ErrorKind::IndeterminateComparison, "dimensional sizes overlap");
  return c == Certainty::Less;
}

std::vector<std::vector<bool>> precedence_closure(const std::vector<ApproximationChain>& chains,
                                                  const ConstantTable& table, Precision p) {
  const size_t n = chains.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) r[i][j] = chain_precedes(chains[i], chains[j], table, p);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

namespace {

IntForm single_form(const EffectiveCycle& y) {
  if (y.t() != 1 || !y.is_zero_cycle()) fail(ErrorKind::UnsupportedCycle, "triples are built in P^1");
  std::optional<IntForm> g;
  for (const auto& c : y.components()) {
    if (!c.form) fail(ErrorKind::UnsupportedCycle, "component without a form");
    for (int k = 0; k < c.multiplicity; ++k) g = g ? *g * *c.form : *c.form;
  }
  if (!g) fail(ErrorKind::DomainError, "empty cycle");
  return *g;
}

}  // namespace

TripleReport verify_triple(const ApproximationTriple& tr, const ProjectivePoint& theta, const ConstantTable& table,
                           const Rational& b, Precision p) {
  const int t = table.t;
  IntForm g = single_form(tr.y);
  SectionSubspace ideal = vanishing_subspace(std::vector<IntForm>{g}, 1, tr.f.degree());
  RatForm fperp = orthogonal_projection(to_rational(tr.f), ideal);
  if (is_zero(fperp)) fail(ErrorKind::ProjectionMismatch, "f_Y^perp = 0");
  if (tr.fbar.degree() != tr.f.degree() || tr.fbar.t() != tr.f.t())
    fail(ErrorKind::ProjectionMismatch, "f and fbar differ in shape");
  BallForm diff = tr.fbar;
  for (size_t i = 0; i < diff.size(); ++i) diff[i] = diff[i] - ComplexBall(BallReal(tr.f[i], p));
  for (const auto& wp : tr.y.points())
    if (!evaluate_at_unit(diff, wp.point, p).contains_zero())
      fail(ErrorKind::ProjectionMismatch, "fbar - f does not vanish on Y");
  TripleReport out;
  const Rational n(table.n_big);
  out.dbar = n * tr.D;
  BallReal ta = a_size(tr.y, table.a, p, table.sigma);
  BallReal dbar = ball(out.dbar, p);
  out.parts.push_back(make_inequality("D(Y,theta) <= -b_t t_a(Y) Dbar", algebraic_distance_points(theta, tr.y, p),
                                      -(ball(table.b(t), p) * ta * dbar)));
  out.parts.push_back(make_inequality("log|f_Y^perp| <= 6 a nbar_t D", log_l2_norm(fperp, p),
                                      ball(6 * table.a * table.nbar(t) * tr.D, p)));
  out.parts.push_back(make_inequality("log|<fbar|theta>| <= -(bbar/n^(6t)) t_a(Y) D",
                                      log_abs(evaluate_at_unit(tr.fbar, theta, p)),
                                      -(ball(table.bbar_triple / rpow(n, 6 * t) * tr.D, p) * ta)));
  out.parts.push_back(make_inequality("t_a(Y) <= (a_t + a n_t) Dbar^t", ta,
                                      ball((table.as(t) + table.a * table.n(t)) * rpow(out.dbar, t), p)));
  out.verdict = Verdict::Holds;
  for (const auto& q : out.parts) out.verdict = worst(out.verdict, q.verdict);
  BallReal ld = min_distance(theta, tr.y, p);
  out.conclusion = make_inequality("log|Y,theta| <= -b t_a(Y) Dbar",
                                   ld.is_exact_zero() ? BallReal::neg_infinity(p) : log_abs(ComplexBall(ld)),
                                   -(ball(b, p) * ta * dbar));
  return out;
}

ApproximationTriple triple_from_chain(const ApproximationChain& chain, const PointSpec& theta,
                                      const ConstantTable& table, const EngineOptions& opts) {
  if (chain.t != 1) fail(ErrorKind::UnsupportedCycle, "triples are built in P^1");
  IntForm g = single_form(chain.end);
  const int D = chain.D;
  ProjectedLattice L = projected_lattice(vanishing_subspace(std::vector<IntForm>{g}, 1, D));
  BallReal ta = a_size(chain.end, table.a, chain.precision, table.sigma);
  auto [len, ev] = nominal_for(table, 1, D, ta, 0);
  EngineOptions o = opts;
  o.policy.start = chain.precision;
  StepSearch s = search_step(L, theta, chain.precision, budget_for(table, 1, D), len, ev, o);
  ApproximationTriple tr;
  tr.f = s.result.form;
  if (g.degree() == D) {
    // Nearest multiple of g, so that f stays small.
    Rational q = l2_inner_product(to_rational(tr.f), to_rational(g)) / l2_norm2(g);
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), Rational(2 * q.get_num() + q.get_den()).get_num_mpz_t(),
               Rational(2 * q.get_den()).get_num_mpz_t());
    tr.f = tr.f - k * g;
  }
  tr.fbar = to_ball(tr.f, s.precision);
  tr.y = chain.end;
  tr.D = D;
  return tr;
}

ScalingExperiment main_theorem_experiment(const PointSpec& theta, const std::vector<int>& degrees,
                                          const ConstantTable& table, const EngineOptions& opts) {
  ScalingExperiment ex;
  std::vector<double> xs, ys;
  std::vector<size_t> fitted_rows;
  for (int D : degrees) {
    ScalingRow row;
    row.D = D;
    try {
      ApproximationChain c = search_approximation_chain(theta, D, table, opts);
      row.degree = c.end.degree();
      row.height = c.steps.back().height;
      row.log_distance = c.log_distance;
      row.precision = c.precision;
      row.completed = true;
      const double ld = c.log_distance.mid_double();
      if (c.log_distance.is_finite() && ld < 0) {
        xs.push_back(std::log(static_cast<double>(D)));
        ys.push_back(std::log(-ld));
        fitted_rows.push_back(ex.rows.size());
      }
      ex.transfer.push_back("D=" + std::to_string(D) + ": every cycle through " + c.closest.to_string() +
                            " has log|X,theta| <= " + c.log_distance.to_string(12));
      ex.chains.push_back(std::move(c));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ThetaNotGeneric) throw;
      row.error = e.what();
    }
    ex.rows.push_back(std::move(row));
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    ex.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ex.intercept = (sy - ex.exponent * sx) / n;
    for (size_t i = 0; i < xs.size(); ++i)
      ex.rows[fitted_rows[i]].fit_residual = ys[i] - (ex.intercept + ex.exponent * xs[i]);
  }
  return ex;
}

}  // namespace dioph
