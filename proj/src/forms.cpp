#include "dioph/forms.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace dioph {

namespace {

void enumerate(int vars, int D, Exponent& cur, std::vector<Exponent>& out) {
  const int pos = static_cast<int>(cur.size());
  if (pos == vars - 1) {
    cur.push_back(D);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = D; k >= 0; --k) {
    cur.push_back(k);
    enumerate(vars, D - k, cur, out);
    cur.pop_back();
  }
}

void check_same(int t1, int d1, int t2, int d2) {
  if (t1 != t2 || d1 != d2) fail(ErrorKind::DimensionMismatch, "forms of different (t, D)");
}

template <class T>
HomogeneousForm<T> add_forms(const HomogeneousForm<T>& a, const HomogeneousForm<T>& b, int sign) {
  check_same(a.t(), a.degree(), b.t(), b.degree());
  HomogeneousForm<T> r = a;
  for (size_t i = 0; i < r.size(); ++i) {
    if (sign > 0) {
      r[i] += b[i];
    } else {
      r[i] -= b[i];
    }
  }
  return r;
}

template <class T>
HomogeneousForm<T> mul_forms(const HomogeneousForm<T>& a, const HomogeneousForm<T>& b) {
  if (a.t() != b.t()) fail(ErrorKind::DimensionMismatch, "forms in different P^t");
  HomogeneousForm<T> r(a.t(), a.degree() + b.degree(), T(0));
  const auto& ma = a.monomials();
  const auto& mb = b.monomials();
  Exponent e(a.t() + 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      for (int k = 0; k <= a.t(); ++k) e[k] = ma[i][k] + mb[j][k];
      r.at(e) += a[i] * b[j];
    }
  }
  return r;
}

std::vector<std::vector<ComplexBall>> unit_powers(const ProjectivePoint& theta, int D, Precision p) {
  auto u = unit_representative(theta, p);
  std::vector<std::vector<ComplexBall>> pw(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    pw[i].reserve(D + 1);
    pw[i].emplace_back(BallReal(1L, p));
    for (int k = 1; k <= D; ++k) pw[i].push_back(pw[i].back() * u[i]);
  }
  return pw;
}

std::string trim_copy(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Parses the sparse format into (t, D, [(exponent, coefficient text)]).
struct SparseTerms {
  int t = 0;
  int D = 0;
  std::vector<std::pair<Exponent, std::string>> terms;
};

SparseTerms parse_sparse(std::string_view text) {
  auto parts = split(trim_copy(text), ';');
  SparseTerms out;
  {
    std::istringstream head(parts[0]);
    if (!(head >> out.D >> out.t) || out.D < 0 || out.t < 1)
      fail(ErrorKind::ParseError, "form header must be 'D t'");
    std::string extra;
    if (head >> extra) fail(ErrorKind::ParseError, "unexpected token in form header: " + extra);
  }
  for (size_t i = 1; i < parts.size(); ++i) {
    std::string term = trim_copy(parts[i]);
    if (term.empty()) continue;
    auto colon = term.find(':');
    if (colon == std::string::npos) fail(ErrorKind::ParseError, "term needs 'exponents : coeff'");
    std::istringstream ex(term.substr(0, colon));
    Exponent e;
    int v;
    while (ex >> v) e.push_back(v);
    if (!ex.eof()) fail(ErrorKind::ParseError, "bad exponent list: " + term);
    int sum = 0;
    for (int x : e) {
      if (x < 0) fail(ErrorKind::ParseError, "negative exponent: " + term);
      sum += x;
    }
    if (static_cast<int>(e.size()) != out.t + 1 || sum != out.D)
      fail(ErrorKind::ParseError, "exponent vector does not match (t, D): " + term);
    out.terms.emplace_back(e, trim_copy(term.substr(colon + 1)));
  }
  return out;
}

// Polynomial syntax: integer-coefficient sum of monomials in x0..xt.
IntForm parse_polynomial(const std::string& s, int t) {
  size_t pos = 0;
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto read_uint = [&]() -> std::string {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };
  std::vector<std::pair<Exponent, Integer>> terms;
  int degree = -1;
  bool first = true;
  for (;;) {
    skip();
    if (pos >= s.size()) break;
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      fail(ErrorKind::ParseError, "expected + or - in polynomial: " + s);
    }
    first = false;
    Integer coeff = 1;
    Exponent e(t + 1, 0);
    bool any = false;
    for (;;) {
      skip();
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        coeff *= Integer(read_uint());
        any = true;
      } else if (pos < s.size() && s[pos] == 'x') {
        ++pos;
        std::string idx = read_uint();
        if (idx.empty()) fail(ErrorKind::ParseError, "variable needs an index: " + s);
        int i = std::stoi(idx);
        if (i > t) fail(ErrorKind::ParseError, "variable x" + idx + " outside P^" + std::to_string(t));
        int k = 1;
        skip();
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          skip();
          std::string ks = read_uint();
          if (ks.empty()) fail(ErrorKind::ParseError, "missing exponent: " + s);
          k = std::stoi(ks);
        }
        e[i] += k;
        any = true;
      } else {
        break;
      }
      skip();
      if (pos < s.size() && s[pos] == '*') ++pos;
    }
    if (!any) fail(ErrorKind::ParseError, "empty term in polynomial: " + s);
    int d = 0;
    for (int x : e) d += x;
    if (degree >= 0 && d != degree) fail(ErrorKind::ParseError, "polynomial is not homogeneous: " + s);
    degree = d;
    terms.emplace_back(e, coeff * sign);
  }
  if (degree < 0) fail(ErrorKind::ParseError, "empty polynomial");
  IntForm f(t, degree, Integer(0));
  for (auto& [e, c] : terms) f.at(e) += c;
  return f;
}

}  // namespace

const std::vector<Exponent>& MonomialBasis::list(int t, int D) {
  if (t < 0 || D < 0) fail(ErrorKind::DimensionMismatch, "invalid (t, D)");
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<Exponent>>> cache;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find({t, D});
    if (it != cache.end()) return *it->second;
  }
  std::unique_lock lock(mutex);
  auto& slot = cache[{t, D}];
  if (!slot) {
    auto v = std::make_unique<std::vector<Exponent>>();
    Exponent cur;
    enumerate(t + 1, D, cur, *v);
    slot = std::move(v);
  }
  return *slot;
}

size_t MonomialBasis::count(int t, int D) { return binomial(D + t, t).get_ui(); }

size_t MonomialBasis::index(const Exponent& e) {
  // Monomials with a larger x0 exponent come first; recurse on the tail.
  size_t rank = 0;
  int D = 0;
  for (int x : e) D += x;
  int vars = static_cast<int>(e.size());
  for (int i = 0; i + 1 < vars; ++i) {
    int rest_vars = vars - i - 1;
    int above = D - e[i] - 1;
    if (above >= 0) rank += binomial(above + rest_vars, rest_vars).get_ui();
    D -= e[i];
  }
  return rank;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer factorial(long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Rational monomial_l2_weight(const Exponent& alpha) {
  int t = static_cast<int>(alpha.size()) - 1;
  int D = 0;
  Integer num = factorial(t);
  for (int a : alpha) {
    num *= factorial(a);
    D += a;
  }
  Rational w(num, factorial(D + t));
  w.canonicalize();
  return w;
}

bool is_zero(const IntForm& f) {
  for (const auto& c : f.coeffs())
    if (c != 0) return false;
  return true;
}

bool is_zero(const RatForm& f) {
  for (const auto& c : f.coeffs())
    if (c != 0) return false;
  return true;
}

IntForm operator+(const IntForm& a, const IntForm& b) { return add_forms(a, b, 1); }
IntForm operator-(const IntForm& a, const IntForm& b) { return add_forms(a, b, -1); }
IntForm operator*(const IntForm& a, const IntForm& b) { return mul_forms(a, b); }
RatForm operator+(const RatForm& a, const RatForm& b) { return add_forms(a, b, 1); }
RatForm operator-(const RatForm& a, const RatForm& b) { return add_forms(a, b, -1); }
RatForm operator*(const RatForm& a, const RatForm& b) { return mul_forms(a, b); }

IntForm operator*(const Integer& s, const IntForm& f) {
  IntForm r = f;
  for (auto& c : r.coeffs()) c *= s;
  return r;
}

RatForm operator*(const Rational& s, const RatForm& f) {
  RatForm r = f;
  for (auto& c : r.coeffs()) c *= s;
  return r;
}

IntForm monomial_form(int t, const Exponent& e, const Integer& c) {
  int D = 0;
  for (int x : e) D += x;
  if (static_cast<int>(e.size()) != t + 1) fail(ErrorKind::DimensionMismatch, "exponent length");
  IntForm f(t, D, Integer(0));
  f.at(e) = c;
  return f;
}

RatForm to_rational(const IntForm& f) {
  std::vector<Rational> c;
  c.reserve(f.size());
  for (const auto& x : f.coeffs()) c.emplace_back(x);
  return RatForm(f.t(), f.degree(), std::move(c));
}

BallForm to_ball(const IntForm& f, Precision p) {
  std::vector<ComplexBall> c;
  c.reserve(f.size());
  for (const auto& x : f.coeffs()) c.emplace_back(BallReal(x, p));
  return BallForm(f.t(), f.degree(), std::move(c));
}

BallForm to_ball(const RatForm& f, Precision p) {
  std::vector<ComplexBall> c;
  c.reserve(f.size());
  for (const auto& x : f.coeffs()) c.emplace_back(BallReal(x, p));
  return BallForm(f.t(), f.degree(), std::move(c));
}

IntForm primitive_multiple(const RatForm& f) {
  Integer l = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  IntForm r(f.t(), f.degree(), Integer(0));
  for (size_t i = 0; i < f.size(); ++i) r[i] = Integer(f[i] * l);
  Integer g = content(r);
  if (g > 1) {
    for (auto& c : r.coeffs()) c /= g;
  }
  return r;
}

Integer content(const IntForm& f) {
  Integer g = 0;
  for (const auto& c : f.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

bool is_primitive(const IntForm& f) { return content(f) == 1; }

IntForm primitive_part(const IntForm& f) {
  Integer g = content(f);
  if (g == 0) fail(ErrorKind::DomainError, "zero form has no primitive part");
  IntForm r = f;
  int sign = 0;
  for (const auto& c : f.coeffs()) {
    if (c != 0) {
      sign = sgn(c);
      break;
    }
  }
  for (auto& c : r.coeffs()) c = c / g * sign;
  return r;
}

Rational l2_inner_product(const RatForm& f, const RatForm& g) {
  check_same(f.t(), f.degree(), g.t(), g.degree());
  Rational s = 0;
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0 || g[i] == 0) continue;
    s += f[i] * g[i] * monomial_l2_weight(mons[i]);
  }
  return s;
}

Rational l2_norm2(const RatForm& f) { return l2_inner_product(f, f); }

Rational l2_norm2(const IntForm& f) {
  Rational s = 0;
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    s += Rational(f[i] * f[i]) * monomial_l2_weight(mons[i]);
  }
  return s;
}

ComplexBall l2_inner_product(const BallForm& f, const BallForm& g) {
  check_same(f.t(), f.degree(), g.t(), g.degree());
  Precision p = kMinPrecision;
  for (const auto& c : f.coeffs()) p = std::max(p, c.precision());
  ComplexBall s(BallReal(0L, p));
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    s += f[i] * g[i].conj() * BallReal(monomial_l2_weight(mons[i]), p);
  }
  return s;
}

BallReal log_l2_norm(const IntForm& f, Precision p) {
  return ball_log(BallReal(l2_norm2(f), p)) / BallReal(2L, p);
}

BallReal log_l2_norm(const RatForm& f, Precision p) {
  return ball_log(BallReal(l2_norm2(f), p)) / BallReal(2L, p);
}

BallReal log_l2_norm(const BallForm& f, Precision p) {
  return ball_log(l2_inner_product(f, f).re()) / BallReal(2L, p);
}

std::vector<ComplexBall> monomial_values(int t, int D, const ProjectivePoint& theta, Precision p) {
  if (theta.dim() != t) fail(ErrorKind::DimensionMismatch, "point and form live in different P^t");
  auto pw = unit_powers(theta, D, p);
  const auto& mons = MonomialBasis::list(t, D);
  std::vector<ComplexBall> out;
  out.reserve(mons.size());
  for (const auto& e : mons) {
    ComplexBall v = pw[0][e[0]];
    for (int k = 1; k <= t; ++k) v *= pw[k][e[k]];
    out.push_back(std::move(v));
  }
  return out;
}

ComplexBall evaluate_at_unit(const BallForm& f, const ProjectivePoint& theta, Precision p) {
  auto vals = monomial_values(f.t(), f.degree(), theta, p);
  ComplexBall s(BallReal(0L, p));
  for (size_t i = 0; i < f.size(); ++i) s += f[i] * vals[i];
  return s;
}

ComplexBall evaluate_at_unit(const IntForm& f, const ProjectivePoint& theta, Precision p) {
  if (theta.is_exact() && evaluate_exact(f, theta) == 0) return ComplexBall(BallReal(0L, p));
  auto vals = monomial_values(f.t(), f.degree(), theta, p);
  ComplexBall s(BallReal(0L, p));
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    s += vals[i] * BallReal(f[i], p);
  }
  return s;
}

ComplexBall evaluate_at_unit(const RatForm& f, const ProjectivePoint& theta, Precision p) {
  if (theta.is_exact() && evaluate_exact(f, theta) == 0) return ComplexBall(BallReal(0L, p));
  auto vals = monomial_values(f.t(), f.degree(), theta, p);
  ComplexBall s(BallReal(0L, p));
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    s += vals[i] * BallReal(f[i], p);
  }
  return s;
}

Integer evaluate_exact(const IntForm& f, const ProjectivePoint& x) {
  if (x.dim() != f.t()) fail(ErrorKind::DimensionMismatch, "point and form live in different P^t");
  const auto& c = x.integer_coords();
  Integer s = 0, term;
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    term = f[i];
    for (int k = 0; k <= f.t(); ++k) {
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), c[k].get_mpz_t(), static_cast<unsigned long>(mons[i][k]));
      term *= pw;
    }
    s += term;
  }
  return s;
}

Rational evaluate_exact(const RatForm& f, const ProjectivePoint& x) {
  if (x.dim() != f.t()) fail(ErrorKind::DimensionMismatch, "point and form live in different P^t");
  const auto& c = x.integer_coords();
  Rational s = 0;
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    Integer term = 1;
    for (int k = 0; k <= f.t(); ++k) {
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), c[k].get_mpz_t(), static_cast<unsigned long>(mons[i][k]));
      term *= pw;
    }
    s += f[i] * term;
  }
  return s;
}

std::vector<Integer> dehomogenize(const IntForm& f) {
  if (f.t() != 1) fail(ErrorKind::DimensionMismatch, "dehomogenize expects a binary form");
  return f.coeffs();
}

IntForm homogenize(const std::vector<Integer>& p, int D) {
  if (static_cast<int>(p.size()) > D + 1) {
    for (size_t i = D + 1; i < p.size(); ++i)
      if (p[i] != 0) fail(ErrorKind::DimensionMismatch, "polynomial degree exceeds D");
  }
  IntForm f(1, D, Integer(0));
  for (size_t i = 0; i < p.size() && static_cast<int>(i) <= D; ++i) f[i] = p[i];
  return f;
}

std::string to_text(const IntForm& f) {
  std::ostringstream os;
  os << f.degree() << ' ' << f.t();
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    os << ';';
    for (int x : mons[i]) os << ' ' << x;
    os << " : " << f[i].get_str();
  }
  return os.str();
}

IntForm parse_int_form(std::string_view text) {
  SparseTerms st = parse_sparse(text);
  IntForm f(st.t, st.D, Integer(0));
  for (auto& [e, c] : st.terms) {
    Rational q = parse_rational(c);
    if (q.get_den() != 1) fail(ErrorKind::ParseError, "integer coefficient expected: " + c);
    f.at(e) += q.get_num();
  }
  return f;
}

RatForm parse_rational_form(std::string_view text) {
  SparseTerms st = parse_sparse(text);
  RatForm f(st.t, st.D, Rational(0));
  for (auto& [e, c] : st.terms) f.at(e) += parse_rational(c);
  return f;
}

BallForm parse_ball_form(std::string_view text, Precision p) {
  SparseTerms st = parse_sparse(text);
  BallForm f(st.t, st.D, ComplexBall(BallReal(0L, p)));
  for (auto& [e, c] : st.terms) f.at(e) += evaluate_expression(c, p).ball;
  return f;
}

IntForm parse_form(std::string_view text, int t) {
  std::string s = trim_copy(text);
  if (s.find(';') != std::string::npos || s.find_first_not_of("0123456789 ") == std::string::npos)
    return parse_int_form(s);
  return parse_polynomial(s, t);
}

std::string to_polynomial_string(const IntForm& f) {
  std::string out;
  const auto& mons = f.monomials();
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    Integer a = ::abs(f[i]);
    if (out.empty()) {
      if (f[i] < 0) out += "-";
    } else {
      out += f[i] < 0 ? " - " : " + ";
    }
    std::string mon;
    for (size_t k = 0; k < mons[i].size(); ++k) {
      if (mons[i][k] == 0) continue;
      if (!mon.empty()) mon += "*";
      mon += "x" + std::to_string(k);
      if (mons[i][k] > 1) mon += "^" + std::to_string(mons[i][k]);
    }
    if (mon.empty()) {
      out += a.get_str();
    } else if (a == 1) {
      out += mon;
    } else {
      out += a.get_str() + "*" + mon;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace dioph
