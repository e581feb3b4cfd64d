#include "dioph/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>

namespace dioph {

using detail::Mpfr;

namespace {

Mpfr from_q(const Rational& q, Precision p, mpfr_rnd_t rnd) {
  Mpfr r(p);
  mpfr_set_q(r.get(), q.get_mpq_t(), rnd);
  return r;
}

void min_into(Mpfr& acc, const Mpfr& v) {
  if (mpfr_less_p(v.get(), acc.get())) mpfr_set(acc.get(), v.get(), MPFR_RNDD);
}

void max_into(Mpfr& acc, const Mpfr& v) {
  if (mpfr_greater_p(v.get(), acc.get())) mpfr_set(acc.get(), v.get(), MPFR_RNDU);
}

Rational mpfr_to_rational(mpfr_srcptr v) {
  if (!mpfr_number_p(v)) fail(ErrorKind::DomainError, "non-finite value has no rational form");
  if (mpfr_zero_p(v)) return Rational(0);
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
  Rational q(m);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  q.canonicalize();
  return q;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

BallReal::BallReal(long v, Precision p) : lo_(p), hi_(p) {
  mpfr_set_si(lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(hi_.get(), v, MPFR_RNDU);
}

BallReal::BallReal(const Integer& v, Precision p) : lo_(p), hi_(p) {
  mpfr_set_z(lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_.get(), v.get_mpz_t(), MPFR_RNDU);
}

BallReal::BallReal(const Rational& v, Precision p)
    : lo_(from_q(v, p, MPFR_RNDD)), hi_(from_q(v, p, MPFR_RNDU)) {}

BallReal BallReal::from_double(double v, Precision p) {
  if (!std::isfinite(v)) fail(ErrorKind::DomainError, "non-finite double");
  Mpfr lo(p), hi(p);
  mpfr_set_d(lo.get(), v, MPFR_RNDD);
  mpfr_set_d(hi.get(), v, MPFR_RNDU);
  return BallReal(std::move(lo), std::move(hi));
}

BallReal BallReal::from_endpoints(const Mpfr& lo, const Mpfr& hi) {
  Precision p = std::max(lo.prec(), hi.prec());
  Mpfr l(p), h(p);
  mpfr_set(l.get(), lo.get(), MPFR_RNDD);
  mpfr_set(h.get(), hi.get(), MPFR_RNDU);
  if (mpfr_nan_p(l.get()) || mpfr_nan_p(h.get()) || mpfr_greater_p(l.get(), h.get()))
    fail(ErrorKind::DomainError, "invalid ball endpoints");
  return BallReal(std::move(l), std::move(h));
}

BallReal BallReal::neg_infinity(Precision p) {
  Mpfr lo(p), hi(p);
  mpfr_set_inf(lo.get(), -1);
  mpfr_set_inf(hi.get(), -1);
  return BallReal(std::move(lo), std::move(hi));
}

BallReal BallReal::around(const Rational& mid, const Rational& rad, Precision p) {
  if (sgn(rad) < 0) fail(ErrorKind::DomainError, "negative radius");
  return BallReal(from_q(mid - rad, p, MPFR_RNDD), from_q(mid + rad, p, MPFR_RNDU));
}

bool BallReal::contains(const Rational& q) const {
  if (!is_finite()) return false;
  return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

bool BallReal::contains(const BallReal& inner) const {
  return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) &&
         mpfr_greaterequal_p(hi_.get(), inner.hi_.get());
}

Mpfr BallReal::mid() const {
  if (is_neg_infinity()) return lo_;
  Mpfr m(precision() + 2);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

Mpfr BallReal::rad() const {
  Mpfr r(precision());
  if (is_exact()) return r;
  Mpfr m = mid();
  Mpfr a(precision()), b(precision());
  mpfr_sub(a.get(), hi_.get(), m.get(), MPFR_RNDU);
  mpfr_sub(b.get(), m.get(), lo_.get(), MPFR_RNDU);
  mpfr_max(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

double BallReal::mid_double() const { return mpfr_get_d(mid().get(), MPFR_RNDN); }

double BallReal::rad_log2() const {
  if (is_exact()) return -std::numeric_limits<double>::infinity();
  Mpfr r = rad();
  if (mpfr_inf_p(r.get())) return std::numeric_limits<double>::infinity();
  long e = 0;
  double d = mpfr_get_d_2exp(&e, r.get(), MPFR_RNDU);
  return std::log2(d) + static_cast<double>(e);
}

Rational BallReal::mid_rational() const { return mpfr_to_rational(mid().get()); }

Rational to_rational(const Mpfr& v) { return mpfr_to_rational(v.get()); }

BallReal BallReal::with_precision(Precision p) const {
  Mpfr lo(p), hi(p);
  mpfr_set(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_set(hi.get(), hi_.get(), MPFR_RNDU);
  return BallReal(std::move(lo), std::move(hi));
}

void BallReal::check_nan() const {
  if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get()))
    fail(ErrorKind::DomainError, "undefined ball operation");
}

BallReal BallReal::operator-() const {
  Mpfr lo(precision()), hi(precision());
  mpfr_neg(lo.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(hi.get(), lo_.get(), MPFR_RNDU);
  return BallReal(std::move(lo), std::move(hi));
}

BallReal& BallReal::operator+=(const BallReal& o) {
  Precision p = std::max(precision(), o.precision());
  Mpfr lo(p), hi(p);
  mpfr_add(lo.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  check_nan();
  return *this;
}

BallReal& BallReal::operator-=(const BallReal& o) { return *this += -o; }

BallReal& BallReal::operator*=(const BallReal& o) {
  Precision p = std::max(precision(), o.precision());
  Mpfr lo(p), hi(p), t(p);
  mpfr_srcptr a[2] = {lo_.get(), hi_.get()};
  mpfr_srcptr b[2] = {o.lo_.get(), o.hi_.get()};
  mpfr_mul(lo.get(), a[0], b[0], MPFR_RNDD);
  mpfr_mul(hi.get(), a[0], b[0], MPFR_RNDU);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      mpfr_mul(t.get(), a[i], b[j], MPFR_RNDD);
      min_into(lo, t);
      mpfr_mul(t.get(), a[i], b[j], MPFR_RNDU);
      max_into(hi, t);
    }
  }
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  check_nan();
  return *this;
}

BallReal& BallReal::operator/=(const BallReal& o) {
  if (o.is_exact_zero()) fail(ErrorKind::DomainError, "division by exact zero");
  if (o.contains_zero()) fail(ErrorKind::BallStraddlesZero, "divisor ball contains zero");
  Precision p = std::max(precision(), o.precision());
  Mpfr lo(p), hi(p), t(p);
  mpfr_srcptr a[2] = {lo_.get(), hi_.get()};
  mpfr_srcptr b[2] = {o.lo_.get(), o.hi_.get()};
  mpfr_div(lo.get(), a[0], b[0], MPFR_RNDD);
  mpfr_div(hi.get(), a[0], b[0], MPFR_RNDU);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      mpfr_div(t.get(), a[i], b[j], MPFR_RNDD);
      min_into(lo, t);
      mpfr_div(t.get(), a[i], b[j], MPFR_RNDU);
      max_into(hi, t);
    }
  }
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  check_nan();
  return *this;
}

std::string BallReal::to_string(int digits) const {
  if (is_neg_infinity()) return "-inf";
  char* buf = nullptr;
  Mpfr m = mid();
  Mpfr r = rad();
  if (is_exact()) {
    mpfr_asprintf(&buf, "%.*Rg", digits, m.get());
  } else {
    mpfr_asprintf(&buf, "%.*Rg +/- %.3Rg", digits, m.get(), r.get());
  }
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BallReal abs(const BallReal& x) {
  if (x.is_nonnegative()) return x;
  if (x.is_negative()) return -x;
  Precision p = x.precision();
  Mpfr lo(p), hi(p), t(p);
  mpfr_neg(t.get(), x.lower().get(), MPFR_RNDU);
  mpfr_max(hi.get(), t.get(), x.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal pow(const BallReal& x, unsigned long n) {
  if (n == 0) return BallReal(1L, x.precision());
  Precision p = x.precision();
  Mpfr lo(p), hi(p);
  const bool even = (n % 2) == 0;
  if (!even || x.is_nonnegative()) {
    mpfr_pow_ui(lo.get(), x.lower().get(), n, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), x.upper().get(), n, MPFR_RNDU);
  } else if (x.is_negative()) {
    mpfr_pow_ui(lo.get(), x.upper().get(), n, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), x.lower().get(), n, MPFR_RNDU);
  } else {
    BallReal a = abs(x);
    mpfr_pow_ui(hi.get(), a.upper().get(), n, MPFR_RNDU);
  }
  return BallReal::from_endpoints(lo, hi);
}

BallReal sqr(const BallReal& x) { return pow(x, 2); }

BallReal sqrt_nonneg(const BallReal& x) {
  if (x.is_negative()) fail(ErrorKind::DomainError, "sqrt of negative ball");
  Precision p = x.precision();
  Mpfr lo(p), hi(p);
  if (mpfr_sgn(x.lower().get()) > 0) mpfr_sqrt(lo.get(), x.lower().get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), x.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal sqrt(const BallReal& x) {
  if (!x.is_nonnegative()) {
    if (x.is_negative()) fail(ErrorKind::DomainError, "sqrt of negative ball");
    fail(ErrorKind::BallStraddlesZero, "sqrt argument straddles zero");
  }
  return sqrt_nonneg(x);
}

BallReal exp(const BallReal& x) {
  Precision p = x.precision();
  Mpfr lo(p), hi(p);
  mpfr_exp(lo.get(), x.lower().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), x.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal ball_log(const BallReal& x) {
  if (x.is_exact_zero()) return BallReal::neg_infinity(x.precision());
  if (x.is_negative()) fail(ErrorKind::DomainError, "log of negative ball");
  if (!x.is_positive()) fail(ErrorKind::BallStraddlesZero, "log argument straddles zero");
  Precision p = x.precision();
  Mpfr lo(p), hi(p);
  mpfr_log(lo.get(), x.lower().get(), MPFR_RNDD);
  mpfr_log(hi.get(), x.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal min(const BallReal& a, const BallReal& b) {
  Precision p = std::max(a.precision(), b.precision());
  Mpfr lo(p), hi(p);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal max(const BallReal& a, const BallReal& b) {
  Precision p = std::max(a.precision(), b.precision());
  Mpfr lo(p), hi(p);
  mpfr_max(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

BallReal hull(const BallReal& a, const BallReal& b) {
  Precision p = std::max(a.precision(), b.precision());
  Mpfr lo(p), hi(p);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

Certainty compare(const BallReal& a, const BallReal& b) {
  if (a.is_exact() && b.is_exact() && mpfr_equal_p(a.lower().get(), b.lower().get()))
    return Certainty::Equal;
  if (mpfr_less_p(a.upper().get(), b.lower().get())) return Certainty::Less;
  if (mpfr_greater_p(a.lower().get(), b.upper().get())) return Certainty::Greater;
  return Certainty::Overlap;
}

bool certainly_le(const BallReal& a, const BallReal& b) {
  return mpfr_lessequal_p(a.upper().get(), b.lower().get()) != 0;
}

bool certainly_lt(const BallReal& a, const BallReal& b) {
  return mpfr_less_p(a.upper().get(), b.lower().get()) != 0;
}

BallReal eval_constant(std::string_view name, Precision p) {
  std::string s = trim(name);
  auto integer_arg = [&](std::string_view fn) -> std::optional<unsigned long> {
    if (s.size() < fn.size() + 3 || s.compare(0, fn.size(), fn) != 0 || s[fn.size()] != '(' ||
        s.back() != ')')
      return std::nullopt;
    std::string inner = trim(std::string_view(s).substr(fn.size() + 1, s.size() - fn.size() - 2));
    if (inner.empty() || !std::all_of(inner.begin(), inner.end(), ::isdigit))
      fail(ErrorKind::UnknownConstant, "constant argument must be a non-negative integer: " + s);
    return std::stoul(inner);
  };

  // Working precision leaves headroom for the magnitude so that the absolute
  // radius stays below 2^(2-p).
  Precision w = p + 8;
  Mpfr lo(w), hi(w);
  if (s == "e") {
    w += 2;
    lo = Mpfr(w);
    hi = Mpfr(w);
    mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
    mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
    mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  } else if (s == "pi") {
    w += 2;
    lo = Mpfr(w);
    hi = Mpfr(w);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
  } else if (auto n = integer_arg("sqrt")) {
    w += static_cast<Precision>(std::bit_width(*n) / 2 + 1);
    lo = Mpfr(w);
    hi = Mpfr(w);
    mpfr_sqrt_ui(lo.get(), *n, MPFR_RNDD);
    mpfr_sqrt_ui(hi.get(), *n, MPFR_RNDU);
  } else if (auto m = integer_arg("log")) {
    if (*m == 0) return BallReal::neg_infinity(p);
    w += 8;
    lo = Mpfr(w);
    hi = Mpfr(w);
    mpfr_log_ui(lo.get(), *m, MPFR_RNDD);
    mpfr_log_ui(hi.get(), *m, MPFR_RNDU);
  } else {
    fail(ErrorKind::UnknownConstant, "unknown constant: " + s);
  }
  return BallReal::from_endpoints(lo, hi);
}

ComplexBall& ComplexBall::operator+=(const ComplexBall& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexBall& ComplexBall::operator-=(const ComplexBall& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexBall& ComplexBall::operator*=(const ComplexBall& o) {
  BallReal r = re_ * o.re_ - im_ * o.im_;
  BallReal i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

ComplexBall& ComplexBall::operator*=(const BallReal& o) {
  re_ *= o;
  im_ *= o;
  return *this;
}

ComplexBall& ComplexBall::operator/=(const ComplexBall& o) {
  BallReal d = o.abs2();
  if (d.is_exact_zero()) fail(ErrorKind::DomainError, "division by exact zero");
  if (d.contains_zero()) fail(ErrorKind::BallStraddlesZero, "complex divisor contains zero");
  *this *= o.conj();
  re_ /= d;
  im_ /= d;
  return *this;
}

std::string ComplexBall::to_string(int digits) const {
  return "(" + re_.to_string(digits) + ") + i(" + im_.to_string(digits) + ")";
}

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) fail(ErrorKind::ParseError, "empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(std::string_view(s).substr(0, slash));
    Rational den = parse_rational(std::string_view(s).substr(slash + 1));
    if (sgn(den) == 0) fail(ErrorKind::ParseError, "zero denominator: " + s);
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) fail(ErrorKind::ParseError, "malformed number: " + s);
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') fail(ErrorKind::ParseError, "malformed number: " + s);
    std::string rest = s.substr(i + 1);
    char* end = nullptr;
    exponent = std::strtol(rest.c_str(), &end, 10);
    if (rest.empty() || *end != '\0') fail(ErrorKind::ParseError, "malformed exponent: " + s);
  }
  Rational q{Integer(digits)};
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

BallReal parse_decimal_ball(std::string_view text, Precision p) {
  std::string s = trim(text);
  bool truncated = false;
  for (std::string_view suffix : {std::string_view("..."), std::string_view("\xE2\x80\xA6")}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
      truncated = true;
      break;
    }
  }
  Rational q = parse_rational(s);
  if (!truncated) return BallReal(q, p);
  if (s.find_first_of("eE/") != std::string::npos)
    fail(ErrorKind::ParseError, "truncated literal must be plain decimal: " + std::string(text));
  auto point = s.find('.');
  long frac = point == std::string::npos ? 0 : static_cast<long>(s.size() - point - 1);
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(frac));
  return BallReal::around(q, Rational(1) / Rational(ten_pow), p);
}

std::string hex_endpoint(const Mpfr& v) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%Ra", v.get());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BallReal ball_from_hex_endpoints(std::string_view lo, std::string_view hi, Precision p) {
  auto read = [&](std::string_view t, mpfr_rnd_t rnd) {
    Mpfr v(p);
    std::string str = trim(t);
    char* end = nullptr;
    mpfr_strtofr(v.get(), str.c_str(), &end, 0, rnd);
    if (str.empty() || *end != '\0') fail(ErrorKind::ParseError, "malformed hex endpoint: " + str);
    return v;
  };
  return BallReal::from_endpoints(read(lo, MPFR_RNDD), read(hi, MPFR_RNDU));
}

std::string to_hex(const BallReal& x) {
  return "[" + hex_endpoint(x.lower()) + "," + hex_endpoint(x.upper()) + "]@" +
         std::to_string(x.precision());
}

BallReal ball_from_hex(std::string_view text) {
  std::string s = trim(text);
  auto at = s.rfind("]@");
  if (s.empty() || s.front() != '[' || at == std::string::npos)
    fail(ErrorKind::ParseError, "malformed hex ball: " + s);
  std::string body = s.substr(1, at - 1);
  auto comma = body.find(',');
  if (comma == std::string::npos) fail(ErrorKind::ParseError, "malformed hex ball: " + s);
  long prec = std::strtol(s.c_str() + at + 2, nullptr, 10);
  if (prec < MPFR_PREC_MIN) fail(ErrorKind::ParseError, "bad precision in hex ball: " + s);
  return ball_from_hex_endpoints(body.substr(0, comma), body.substr(comma + 1), prec);
}

}  // namespace dioph
