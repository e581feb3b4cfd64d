#include "dioph/sections.hpp"

namespace dioph {

namespace {

RatVector weights(int t, int D) {
  RatVector w;
  for (const auto& e : MonomialBasis::list(t, D)) w.push_back(monomial_l2_weight(e));
  return w;
}

// Replaces the spanning set by an independent basis (rows of the rref).
std::vector<RatForm> independent_basis(const std::vector<RatForm>& span, int t, int D) {
  if (span.empty()) return {};
  RatMatrix m;
  for (const auto& f : span) m.push_back(f.coeffs());
  auto pivots = rref(m);
  std::vector<RatForm> out;
  for (size_t i = 0; i < pivots.size(); ++i) out.emplace_back(t, D, m[i]);
  return out;
}

}  // namespace

SectionSubspace zero_subspace(int t, int D) { return SectionSubspace{t, D, SubspaceRole::VanishingIdeal, {}}; }

SectionSubspace vanishing_subspace(const std::vector<ProjectivePoint>& points, int t, int D) {
  SectionSubspace s{t, D, SubspaceRole::VanishingIdeal, {}};
  if (points.empty()) {
    for (size_t i = 0; i < s.ambient_dim(); ++i) {
      RatForm f(t, D, Rational(0));
      f[i] = 1;
      s.basis.push_back(f);
    }
    return s;
  }
  const auto& mons = MonomialBasis::list(t, D);
  RatMatrix eval;
  for (const auto& p : points) {
    if (p.dim() != t) fail(ErrorKind::DimensionMismatch, "point outside P^t");
    RatVector row;
    for (const auto& e : mons) {
      IntForm m = monomial_form(t, e);
      row.emplace_back(evaluate_exact(m, p));
    }
    eval.push_back(row);
  }
  for (auto& v : kernel(eval, mons.size())) s.basis.emplace_back(t, D, v);
  return s;
}

SectionSubspace vanishing_subspace(const std::vector<IntForm>& generators, int t, int D) {
  SectionSubspace s{t, D, SubspaceRole::VanishingIdeal, {}};
  std::vector<RatForm> span;
  for (const auto& g : generators) {
    if (g.t() != t) fail(ErrorKind::DimensionMismatch, "generator outside P^t");
    if (is_zero(g)) fail(ErrorKind::DomainError, "zero generator");
    int rest = D - g.degree();
    if (rest < 0) continue;
    for (const auto& e : MonomialBasis::list(t, rest)) span.push_back(to_rational(g * monomial_form(t, e)));
  }
  s.basis = independent_basis(span, t, D);
  return s;
}

SectionSubspace orthogonal_complement(const SectionSubspace& s) {
  SectionSubspace out{s.t, s.D,
                      s.role == SubspaceRole::VanishingIdeal ? SubspaceRole::OrthoComplement
                                                             : SubspaceRole::VanishingIdeal,
                      {}};
  const size_t n = s.ambient_dim();
  if (s.basis.empty()) {
    for (size_t i = 0; i < n; ++i) {
      RatForm f(s.t, s.D, Rational(0));
      f[i] = 1;
      out.basis.push_back(f);
    }
    return out;
  }
  // <f, b> = sum_i f_i b_i w_i, so the complement is the kernel of b_i w_i.
  RatVector w = weights(s.t, s.D);
  RatMatrix m;
  for (const auto& b : s.basis) {
    RatVector row(n);
    for (size_t i = 0; i < n; ++i) row[i] = b[i] * w[i];
    m.push_back(row);
  }
  for (auto& v : kernel(m, n)) out.basis.emplace_back(s.t, s.D, v);
  return out;
}

Projector::Projector(const SectionSubspace& ideal) : ideal_(ideal) {
  const size_t k = ideal_.dim();
  if (k == 0) return;
  RatMatrix g(k, RatVector(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i; j < k; ++j) g[i][j] = g[j][i] = l2_inner_product(ideal_.basis[i], ideal_.basis[j]);
  // Invert via Gauss-Jordan on [G | I].
  for (size_t i = 0; i < k; ++i) {
    g[i].resize(2 * k, Rational(0));
    g[i][k + i] = 1;
  }
  auto pivots = rref(g);
  if (pivots.size() != k || pivots.back() != k - 1) fail(ErrorKind::SingularGram, "ideal basis is dependent");
  gram_inverse_.assign(k, RatVector(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) gram_inverse_[i][j] = g[i][k + j];
}

RatForm Projector::project(const RatForm& f) const {
  if (f.t() != ideal_.t || f.degree() != ideal_.D)
    fail(ErrorKind::DimensionMismatch, "form and ideal differ in (t, D)");
  const size_t k = ideal_.dim();
  if (k == 0) return f;
  RatVector rhs(k);
  for (size_t i = 0; i < k; ++i) rhs[i] = l2_inner_product(f, ideal_.basis[i]);
  RatForm out = f;
  for (size_t i = 0; i < k; ++i) {
    Rational c = 0;
    for (size_t j = 0; j < k; ++j) c += gram_inverse_[i][j] * rhs[j];
    if (c == 0) continue;
    for (size_t m = 0; m < out.size(); ++m) out[m] -= c * ideal_.basis[i][m];
  }
  return out;
}

RatForm orthogonal_projection(const RatForm& f, const SectionSubspace& ideal) {
  return Projector(ideal).project(f);
}

ProjectedLattice projected_lattice(const SectionSubspace& ideal) {
  ProjectedLattice L;
  L.t = ideal.t;
  L.D = ideal.D;
  const auto& mons = MonomialBasis::list(ideal.t, ideal.D);
  const size_t n = mons.size();
  if (ideal.dim() == 0) {
    for (size_t i = 0; i < n; ++i) {
      L.representatives.push_back(monomial_form(ideal.t, mons[i]));
      L.projections.push_back(to_rational(L.representatives.back()));
    }
  } else {
    Projector proj(ideal);
    std::vector<RatForm> images;
    Integer denom = 1;
    for (const auto& e : mons) {
      images.push_back(proj.project(monomial_form(ideal.t, e)));
      for (const auto& c : images.back().coeffs())
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), c.get_den_mpz_t());
    }
    IntMatrix a(n, IntVector(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) a[i][j] = Integer(images[i][j] * denom);
    HermiteResult hr = hermite_rows(a);
    const size_t expected = n - ideal.dim();
    if (hr.rank != expected)
      fail(ErrorKind::SingularGram, "projected lattice has rank " + std::to_string(hr.rank) +
                                        ", expected " + std::to_string(expected));
    for (size_t r = 0; r < hr.rank; ++r) {
      IntForm rep(ideal.t, ideal.D, Integer(0));
      for (size_t i = 0; i < n; ++i) rep[i] = hr.u[r][i];
      RatForm pr(ideal.t, ideal.D, Rational(0));
      for (size_t i = 0; i < n; ++i) {
        pr[i] = Rational(hr.h[r][i], denom);
        pr[i].canonicalize();
      }
      L.representatives.push_back(rep);
      L.projections.push_back(pr);
    }
  }
  const size_t r = L.projections.size();
  L.gram.assign(r, RatVector(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j)
      L.gram[i][j] = L.gram[j][i] = l2_inner_product(L.projections[i], L.projections[j]);
  return L;
}

}  // namespace dioph
