#include "dioph/lattice.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dioph {

namespace {

Integer lcm_of_denominators(const RatMatrix& m) {
  Integer l = 1;
  for (const auto& row : m)
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

IntMatrix scale_to_integers(const RatMatrix& m, const Integer& l) {
  IntMatrix out(m.size(), IntVector(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) out[i][j] = Integer(m[i][j] * l);
  return out;
}

void divexact(Integer& x, const Integer& d) { mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t()); }

Integer round_div(const Integer& a, const Integer& b) {
  // nearest integer to a/b for b > 0
  Integer num = 2 * a + b, den = 2 * b, q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

class IntegralLll {
 public:
  IntegralLll(IntMatrix g, IntMatrix h, const Rational& delta)
      : n_(g.size()), g_(std::move(g)), h_(std::move(h)), lam_(n_, IntVector(n_)), d_(n_ + 1) {
    p_ = delta.get_num();
    q_ = delta.get_den();
  }

  size_t run() {
    if (n_ == 0) return 0;
    d_[0] = 1;
    d_[1] = g_[0][0];
    if (d_[1] <= 0) fail(ErrorKind::SingularGram, "Gram matrix is not positive definite");
    size_t k = 1, kmax = 0;
    while (k < n_) {
      if (k > kmax) {
        kmax = k;
        incremental_gram_schmidt(k);
      }
      red(k, k - 1);
      const Integer& lam = lam_[k][k - 1];
      if (q_ * d_[k + 1] * d_[k - 1] < p_ * d_[k] * d_[k] - q_ * lam * lam) {
        swap(k, kmax);
        k = std::max<size_t>(1, k - 1);
      } else {
        for (size_t l = k - 1; l-- > 0;) red(k, l);
        ++k;
      }
    }
    return swaps_;
  }

  IntMatrix& gram() { return g_; }
  IntMatrix& transform() { return h_; }

 private:
  void incremental_gram_schmidt(size_t k) {
    for (size_t j = 0; j <= k; ++j) {
      Integer u = g_[k][j];
      for (size_t i = 0; i < j; ++i) {
        u = d_[i + 1] * u - lam_[k][i] * lam_[j][i];
        divexact(u, d_[i]);
      }
      if (j < k) {
        lam_[k][j] = u;
      } else {
        if (u <= 0) fail(ErrorKind::SingularGram, "Gram matrix is not positive definite");
        d_[k + 1] = u;
      }
    }
  }

  void red(size_t k, size_t l) {
    Integer twice = 2 * lam_[k][l];
    if (::abs(twice) <= d_[l + 1]) return;
    Integer r = round_div(lam_[k][l], d_[l + 1]);
    for (size_t c = 0; c < h_[k].size(); ++c) h_[k][c] -= r * h_[l][c];
    for (size_t c = 0; c < n_; ++c) g_[k][c] -= r * g_[l][c];
    for (size_t c = 0; c < n_; ++c) g_[c][k] -= r * g_[c][l];
    lam_[k][l] -= r * d_[l + 1];
    for (size_t i = 0; i < l; ++i) lam_[k][i] -= r * lam_[l][i];
  }

  void swap(size_t k, size_t kmax) {
    ++swaps_;
    std::swap(h_[k], h_[k - 1]);
    std::swap(g_[k], g_[k - 1]);
    for (size_t c = 0; c < n_; ++c) std::swap(g_[c][k], g_[c][k - 1]);
    for (size_t j = 0; j + 1 < k; ++j) std::swap(lam_[k][j], lam_[k - 1][j]);
    Integer lam = lam_[k][k - 1];
    Integer b = d_[k - 1] * d_[k + 1] + lam * lam;
    divexact(b, d_[k]);
    for (size_t i = k + 1; i <= kmax; ++i) {
      Integer t = lam_[i][k];
      Integer nk = d_[k + 1] * lam_[i][k - 1] - lam * t;
      divexact(nk, d_[k]);
      lam_[i][k] = nk;
      Integer nk1 = b * t + lam * lam_[i][k];
      divexact(nk1, d_[k + 1]);
      lam_[i][k - 1] = nk1;
    }
    d_[k] = b;
  }

  size_t n_;
  IntMatrix g_;
  IntMatrix h_;
  IntMatrix lam_;
  IntVector d_;
  Integer p_, q_;
  size_t swaps_ = 0;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  const size_t n = a.size(), m = b[0].size(), k = b.size();
  IntMatrix c(n, IntVector(m, Integer(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RatMatrix congruence(const IntMatrix& t, const RatMatrix& g) {
  const size_t n = t.size(), m = g.size();
  RatMatrix tg(n, RatVector(m, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < m; ++l) {
      if (t[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) tg[i][j] += Rational(t[i][l]) * g[l][j];
    }
  RatMatrix out(n, RatVector(n, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t l = 0; l < m; ++l)
        if (t[j][l] != 0) out[i][j] += tg[i][l] * Rational(t[j][l]);
  return out;
}

BallReal upper_abs(const ComplexBall& z) { return z.abs(); }

}  // namespace

MetricLattice MetricLattice::from_basis(const IntMatrix& rows) {
  MetricLattice L;
  L.basis = rows;
  const size_t n = rows.size();
  L.gram.assign(n, RatVector(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      Integer s = 0;
      for (size_t k = 0; k < rows[i].size(); ++k) s += rows[i][k] * rows[j][k];
      L.gram[i][j] = L.gram[j][i] = Rational(s);
    }
  return L;
}

BallReal arithmetic_degree(const MetricLattice& L, Precision p) {
  if (L.rank() == 0) return BallReal(0L, p);
  Rational det = determinant(L.gram);
  if (det <= 0) fail(ErrorKind::SingularGram, "Gram determinant is not positive");
  return -(ball_log(BallReal(det, p)) / BallReal(2L, p));
}

LllResult lll_reduce_integral(IntMatrix gram, IntMatrix transform, const Rational& delta) {
  if (delta <= Rational(1, 4) || delta >= 1) fail(ErrorKind::DomainError, "delta must lie in (1/4, 1)");
  IntegralLll lll(std::move(gram), std::move(transform), delta);
  LllResult res;
  res.swaps = lll.run();
  res.transform = std::move(lll.transform());
  res.reduced.gram.assign(res.transform.size(), RatVector(res.transform.size()));
  const auto& g = lll.gram();
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) res.reduced.gram[i][j] = Rational(g[i][j]);
  return res;
}

LllResult lll_reduce(const MetricLattice& L, const Rational& delta) {
  const size_t n = L.rank();
  if (n == 0) fail(ErrorKind::EmptyLattice, "lattice of rank 0");
  Integer l = lcm_of_denominators(L.gram);
  LllResult res = lll_reduce_integral(scale_to_integers(L.gram, l), identity_matrix(n), delta);
  for (auto& row : res.reduced.gram)
    for (auto& x : row) {
      x /= l;
      x.canonicalize();
    }
  if (!L.basis.empty()) res.reduced.basis = multiply(res.transform, L.basis);
  return res;
}

bool satisfies_lll(const RatMatrix& gram, const Rational& delta) {
  const size_t n = gram.size();
  RatMatrix mu(n, RatVector(n, Rational(0)));
  RatVector bstar(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      Rational s = gram[i][j];
      for (size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
      mu[i][j] = s / bstar[j];
    }
    Rational s = gram[i][i];
    for (size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
    bstar[i] = s;
    if (s <= 0) return false;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (::abs(mu[i][j]) > Rational(1, 2)) return false;
  for (size_t k = 1; k < n; ++k)
    if (bstar[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) return false;
  return true;
}

std::vector<int> nonzero_combination(const std::vector<std::vector<ComplexBall>>& vectors) {
  const size_t n = vectors.size();
  if (n == 0) return {};
  for (size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != n) fail(ErrorKind::DimensionMismatch, "need n vectors in C^n");
    if (!vectors[i][i].is_nonzero())
      fail(ErrorKind::PrecisionExhausted, "diagonal component not certified nonzero");
  }
  std::vector<int> m(n, 0);
  std::vector<std::vector<ComplexBall>> partial(n + 1);
  Precision p = vectors[0][0].precision();
  partial[0].assign(n, ComplexBall(BallReal(0L, p)));
  // Depth-first over i with the smallest admissible m_i first; the inductive
  // argument makes the first branch succeed when all balls are certified.
  std::function<bool(size_t)> dfs = [&](size_t i) -> bool {
    if (i == n) return true;
    for (int cand = 1; cand <= static_cast<int>(n); ++cand) {
      std::vector<ComplexBall> w = partial[i];
      BallReal k(static_cast<long>(cand), p);
      bool ok = true;
      for (size_t j = 0; j < n; ++j) {
        w[j] += vectors[i][j] * k;
        if (j <= i && !w[j].is_nonzero()) ok = false;
      }
      if (!ok) continue;
      partial[i + 1] = std::move(w);
      m[i] = cand;
      if (dfs(i + 1)) return true;
    }
    return false;
  };
  if (!dfs(0)) fail(ErrorKind::PrecisionExhausted, "no certified nonzero combination found");
  return m;
}

CombinedForm combine_component_searches(const std::vector<IntForm>& forms,
                                        const std::vector<std::vector<ComplexBall>>& witnesses) {
  if (forms.empty()) fail(ErrorKind::EmptyLattice, "no component forms");
  CombinedForm out;
  out.multipliers = nonzero_combination(witnesses);
  out.form = IntForm(forms[0].t(), forms[0].degree(), Integer(0));
  for (size_t i = 0; i < forms.size(); ++i) out.form = out.form + Integer(out.multipliers[i]) * forms[i];
  return out;
}

BallReal log_abs(const ComplexBall& z) {
  BallReal a = z.abs();
  if (a.is_exact_zero()) return BallReal::neg_infinity(a.precision());
  if (a.is_positive()) return ball_log(a);
  detail::Mpfr lo(a.precision());
  mpfr_set_inf(lo.get(), -1);
  detail::Mpfr hi(a.precision());
  mpfr_log(hi.get(), a.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

SearchResult minkowski_skewed_search(const ProjectedLattice& input, const ProjectivePoint& theta,
                                     Precision p, const SearchOptions& opts) {
  const size_t n = input.rank();
  if (n == 0) fail(ErrorKind::EmptyLattice, "section lattice is empty");
  if (theta.dim() != input.t) fail(ErrorKind::DimensionMismatch, "theta outside P^t");

  // Reduce the unweighted lattice first: a skewed basis makes the
  // coordinates of short vectors, and with them the evaluation radii, large.
  const Integer scale = lcm_of_denominators(input.gram);
  IntMatrix g0 = scale_to_integers(input.gram, scale);
  ProjectedLattice L;
  L.t = input.t;
  L.D = input.D;
  {
    LllResult r0 = lll_reduce_integral(g0, identity_matrix(n), opts.delta);
    IntMatrix tt(n, IntVector(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) tt[i][j] = r0.transform[j][i];
    g0 = multiply(multiply(r0.transform, g0), tt);
    for (size_t i = 0; i < n; ++i) {
      IntForm rep(L.t, L.D, Integer(0));
      RatForm proj(L.t, L.D, Rational(0));
      for (size_t j = 0; j < n; ++j) {
        const Integer& c = r0.transform[i][j];
        if (c == 0) continue;
        rep = rep + c * input.representatives[j];
        proj = proj + Rational(c) * input.projections[j];
      }
      L.representatives.push_back(std::move(rep));
      L.projections.push_back(std::move(proj));
    }
  }

  // Evaluation functional on the lattice basis.
  std::vector<ComplexBall> ev;
  std::vector<Rational> ev_exact;
  ev.reserve(n);
  for (const auto& f : L.projections) {
    ev.push_back(evaluate_at_unit(f, theta, p));
    if (theta.is_exact()) ev_exact.push_back(evaluate_exact(f, theta));
  }
  const bool has_imag = std::any_of(ev.begin(), ev.end(), [](const ComplexBall& z) { return !z.im().is_exact_zero(); });


  // Admissible iff y^T g0 y <= threshold, i.e. log-norm within budget.
  Integer threshold;
  {
    detail::Mpfr e(128);
    mpfr_set_d(e.get(), 2 * opts.length_budget, MPFR_RNDD);
    mpfr_exp(e.get(), e.get(), MPFR_RNDD);
    mpfr_mul_z(e.get(), e.get(), scale.get_mpz_t(), MPFR_RNDD);
    mpfr_get_z(threshold.get_mpz_t(), e.get(), MPFR_RNDD);
  }

  auto quad = [&](const IntVector& y) {
    Integer s = 0;
    for (size_t i = 0; i < n; ++i) {
      if (y[i] == 0) continue;
      Integer row = 0;
      for (size_t j = 0; j < n; ++j)
        if (y[j] != 0) row += g0[i][j] * y[j];
      s += y[i] * row;
    }
    return s;
  };
  auto evaluate = [&](const IntVector& y) {
    ComplexBall s(BallReal(0L, p));
    for (size_t i = 0; i < n; ++i)
      if (y[i] != 0) s += ev[i] * BallReal(y[i], p);
    return s;
  };
  auto form_of = [&](const IntVector& y) {
    IntForm f(L.t, L.D, Integer(0));
    for (size_t i = 0; i < n; ++i)
      if (y[i] != 0) f = f + y[i] * L.representatives[i];
    return f;
  };
  auto in_box = [&](const IntVector& y) {
    if (!opts.coefficient_box) return true;
    IntForm f = form_of(y);
    for (const auto& c : f.coeffs())
      if (::abs(c) > *opts.coefficient_box) return false;
    return true;
  };

  struct Best {
    IntVector y;
    ComplexBall eval;
    detail::Mpfr upper{64};
    int w = 0;
    bool exact_zero = false;
    bool admissible = false;
    Integer norm2;
  };
  std::optional<Best> best;
  std::optional<Best> fallback;  // shortest vector seen when nothing is admissible

  auto consider = [&](const IntVector& y, int w) -> bool {
    bool nonzero = std::any_of(y.begin(), y.end(), [](const Integer& x) { return x != 0; });
    if (!nonzero) return false;
    Integer nq = quad(y);
    const bool admissible = nq <= threshold && in_box(y);
    if (!admissible) {
      if (!best && (!fallback || nq < fallback->norm2)) {
        fallback = Best{y, evaluate(y), detail::Mpfr(64), w, false, false, nq};
      }
      return false;
    }
    bool exact_zero = false;
    if (theta.is_exact()) {
      Rational s = 0;
      for (size_t i = 0; i < n; ++i)
        if (y[i] != 0) s += ev_exact[i] * y[i];
      exact_zero = s == 0;
    }
    ComplexBall z = exact_zero ? ComplexBall(BallReal(0L, p)) : evaluate(y);
    BallReal a = upper_abs(z);
    detail::Mpfr up(a.upper().prec());
    mpfr_set(up.get(), a.upper().get(), MPFR_RNDU);
    bool better = !best || !best->admissible || (exact_zero && !best->exact_zero) ||
                  (!best->exact_zero && mpfr_less_p(up.get(), best->upper.get()));
    if (better) best = Best{y, z, up, w, exact_zero, true, nq};
    return true;
  };

  IntMatrix transform = identity_matrix(n);
  const int step = std::max(1, opts.weight_step_bits);
  const int w_max = static_cast<int>(p) - 24;
  int misses = 0;
  size_t tried = 0;
  bool limited = false;
  for (int w = 0;; w += step) {
    if (w > w_max) {
      limited = misses == 0;
      break;
    }
    ++tried;
    // Integer evaluation coordinates at weight 2^w.
    IntVector re(n), im(n);
    for (size_t i = 0; i < n; ++i) {
      detail::Mpfr m = ev[i].re().mid();
      mpfr_mul_2si(m.get(), m.get(), w, MPFR_RNDN);
      mpfr_get_z(re[i].get_mpz_t(), m.get(), MPFR_RNDN);
      if (has_imag) {
        detail::Mpfr mi = ev[i].im().mid();
        mpfr_mul_2si(mi.get(), mi.get(), w, MPFR_RNDN);
        mpfr_get_z(im[i].get_mpz_t(), mi.get(), MPFR_RNDN);
      }
    }
    // Gram of the current (warm-started) basis under the skewed metric.
    IntMatrix gw = multiply(multiply(transform, g0), [&] {
      IntMatrix tt(n, IntVector(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) tt[i][j] = transform[j][i];
      return tt;
    }());
    IntVector tre(n, Integer(0)), tim(n, Integer(0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        tre[i] += transform[i][j] * re[j];
        if (has_imag) tim[i] += transform[i][j] * im[j];
      }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) gw[i][j] += tre[i] * tre[j] + tim[i] * tim[j];
    LllResult r = lll_reduce_integral(std::move(gw), identity_matrix(n), opts.delta);
    transform = multiply(r.transform, transform);

    bool any = false;
    auto row = [&](size_t k) { return transform[k]; };
    if (n <= 5) {
      std::vector<int> eps(n, -1);
      for (;;) {
        size_t k = 0;
        while (k < n && eps[k] == 1) eps[k++] = -1;
        if (k == n) break;
        ++eps[k];
        // skip sign duplicates: first nonzero coefficient positive
        auto first = std::find_if(eps.begin(), eps.end(), [](int e) { return e != 0; });
        if (first == eps.end() || *first < 0) continue;
        IntVector y(n, Integer(0));
        for (size_t i = 0; i < n; ++i)
          if (eps[i] != 0)
            for (size_t j = 0; j < n; ++j) y[j] += eps[i] * transform[i][j];
        any |= consider(y, w);
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        any |= consider(row(i), w);
        for (size_t j = i + 1; j < n && j < i + 4; ++j) {
          IntVector plus(n), minus(n);
          for (size_t c = 0; c < n; ++c) {
            plus[c] = transform[i][c] + transform[j][c];
            minus[c] = transform[i][c] - transform[j][c];
          }
          any |= consider(plus, w);
          any |= consider(minus, w);
        }
      }
    }
    if (best && best->exact_zero) break;
    if (any) {
      misses = 0;
    } else if (best) {
      if (++misses >= 3) break;
    } else if (w > 64 && ++misses >= 3) {
      break;
    }
  }

  if (!best) {
    if (!fallback) fail(ErrorKind::EmptyLattice, "no nonzero candidate");
    best = fallback;
  }
  SearchResult out;
  out.form = form_of(best->y);
  {
    auto lead = std::find_if(out.form.coeffs().begin(), out.form.coeffs().end(),
                             [](const Integer& x) { return x != 0; });
    if (lead != out.form.coeffs().end() && *lead < 0) {
      for (auto& x : best->y) x = -x;
      out.form = Integer(-1) * out.form;
      best->eval = -best->eval;
    }
  }
  out.projection = RatForm(L.t, L.D, Rational(0));
  for (size_t i = 0; i < n; ++i)
    if (best->y[i] != 0) out.projection = out.projection + Rational(best->y[i]) * L.projections[i];
  auto& c = out.certificate;
  c.rank = n;
  c.precision = p;
  c.weight_bits = best->w;
  c.weights_tried = tried;
  c.exact_zero = best->exact_zero;
  c.precision_limited = limited;
  c.eval = best->eval;
  c.log_eval = best->exact_zero ? BallReal::neg_infinity(p) : log_abs(best->eval);
  c.log_norm = log_l2_norm(out.projection, p);
  c.length_budget = opts.length_budget;
  c.length_budget_met = best->admissible;
  if (opts.nominal_length_budget) {
    c.nominal_length_budget = opts.nominal_length_budget;
    c.nominal_length_met = certainly_le(c.log_norm, BallReal::from_double(*opts.nominal_length_budget, p));
  }
  if (opts.nominal_eval_budget) {
    c.nominal_eval_budget = opts.nominal_eval_budget;
    c.nominal_eval_met = certainly_le(c.log_eval, BallReal::from_double(*opts.nominal_eval_budget, p));
  }
  return out;
}

std::string lattice_dump(const MetricLattice& L) {
  std::ostringstream os;
  os << "rank " << L.rank() << "\n";
  os << "basis " << L.basis.size() << "\n";
  for (const auto& row : L.basis) {
    for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j].get_str();
    os << "\n";
  }
  os << "gram\n";
  for (const auto& row : L.gram) {
    for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j].get_str();
    os << "\n";
  }
  return os.str();
}

MetricLattice parse_lattice_dump(const std::string& text) {
  std::istringstream is(text);
  std::string word;
  size_t n = 0, rows = 0;
  if (!(is >> word >> n) || word != "rank") fail(ErrorKind::ParseError, "lattice dump: expected 'rank n'");
  if (!(is >> word >> rows) || word != "basis") fail(ErrorKind::ParseError, "lattice dump: expected 'basis k'");
  MetricLattice L;
  std::string line;
  std::getline(is, line);
  for (size_t i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) fail(ErrorKind::ParseError, "lattice dump: missing basis row");
    std::istringstream rs(line);
    IntVector row;
    while (rs >> word) row.emplace_back(word);
    L.basis.push_back(row);
  }
  if (!(is >> word) || word != "gram") fail(ErrorKind::ParseError, "lattice dump: expected 'gram'");
  L.gram.assign(n, RatVector(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!(is >> word)) fail(ErrorKind::ParseError, "lattice dump: gram too short");
      L.gram[i][j] = Rational(word);
      L.gram[i][j].canonicalize();
    }
  return L;
}

}  // namespace dioph
