#pragma once

// Exact integers/rationals (GMP) and certified real/complex balls (MPFR with
// directed rounding). Every ball operation returns an enclosure of the exact
// result for every choice of inputs inside the argument balls.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "dioph/error.hpp"

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;
using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;
inline constexpr Precision kMaxPrecision = 16384;
inline constexpr Precision kMinPrecision = 16;

namespace detail {

// Owning mpfr_t with value semantics.
class Mpfr {
 public:
  explicit Mpfr(Precision p = kDefaultPrecision) {
    mpfr_init2(v_, p);
    mpfr_set_zero(v_, 1);
  }
  Mpfr(const Mpfr& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mpfr(Mpfr&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Mpfr& operator=(const Mpfr& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Mpfr& operator=(Mpfr&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  Precision prec() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

}  // namespace detail

enum class Certainty { Less, Greater, Equal, Overlap };

/// Real ball [lo, hi] with dyadic endpoints. The exact value -inf (both
/// endpoints -inf) is the distinguished NEG_INFINITY of log-scale quantities;
/// it absorbs under addition.
class BallReal {
 public:
  BallReal() : BallReal(0L, kDefaultPrecision) {}
  BallReal(long v, Precision p);
  BallReal(const Integer& v, Precision p);
  BallReal(const Rational& v, Precision p);
  static BallReal from_double(double v, Precision p);
  static BallReal from_endpoints(const detail::Mpfr& lo, const detail::Mpfr& hi);
  static BallReal neg_infinity(Precision p = kDefaultPrecision);
  /// Ball [mid - rad, mid + rad] with rad given as a non-negative rational.
  static BallReal around(const Rational& mid, const Rational& rad, Precision p);

  Precision precision() const { return lo_.prec(); }
  const detail::Mpfr& lower() const { return lo_; }
  const detail::Mpfr& upper() const { return hi_; }

  bool is_exact() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool is_neg_infinity() const { return mpfr_inf_p(hi_.get()) && mpfr_sgn(hi_.get()) < 0; }
  bool is_exact_zero() const { return mpfr_zero_p(lo_.get()) && mpfr_zero_p(hi_.get()); }
  bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }
  bool is_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool is_negative() const { return mpfr_sgn(hi_.get()) < 0; }
  bool is_nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }
  bool is_finite() const { return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get()); }
  bool contains(const Rational& q) const;
  bool contains(const BallReal& inner) const;

  /// Midpoint (exact, one extra bit) and radius (rounded up).
  detail::Mpfr mid() const;
  detail::Mpfr rad() const;
  double mid_double() const;
  double lo_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
  /// log2 of the radius; -inf for exact balls.
  double rad_log2() const;
  Rational mid_rational() const;

  /// Same enclosure with endpoints re-rounded outward to precision p.
  BallReal with_precision(Precision p) const;

  BallReal operator-() const;
  BallReal& operator+=(const BallReal& o);
  BallReal& operator-=(const BallReal& o);
  BallReal& operator*=(const BallReal& o);
  BallReal& operator/=(const BallReal& o);

  friend BallReal operator+(BallReal a, const BallReal& b) { return a += b; }
  friend BallReal operator-(BallReal a, const BallReal& b) { return a -= b; }
  friend BallReal operator*(BallReal a, const BallReal& b) { return a *= b; }
  friend BallReal operator/(BallReal a, const BallReal& b) { return a /= b; }

  std::string to_string(int digits = 20) const;

 private:
  BallReal(detail::Mpfr lo, detail::Mpfr hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}
  void check_nan() const;

  detail::Mpfr lo_;
  detail::Mpfr hi_;
};

BallReal abs(const BallReal& x);
BallReal sqr(const BallReal& x);
/// sqrt of a quantity known to be non-negative: a negative lower endpoint
/// (rounding debris) is clamped to 0.
BallReal sqrt_nonneg(const BallReal& x);
BallReal sqrt(const BallReal& x);
BallReal exp(const BallReal& x);
BallReal pow(const BallReal& x, unsigned long n);
BallReal min(const BallReal& a, const BallReal& b);
BallReal max(const BallReal& a, const BallReal& b);
BallReal hull(const BallReal& a, const BallReal& b);

/// log with certification: exact zero maps to NEG_INFINITY; a ball that
/// straddles zero throws BallStraddlesZero; a negative ball throws DomainError.
BallReal ball_log(const BallReal& x);

Certainty compare(const BallReal& a, const BallReal& b);
/// a <= b holds for every value in both balls.
bool certainly_le(const BallReal& a, const BallReal& b);
bool certainly_lt(const BallReal& a, const BallReal& b);

/// Constants "e", "pi", "sqrt(n)", "log(n)" with radius <= 2^(2-p).
BallReal eval_constant(std::string_view name, Precision p);

/// Complex ball as a rectangle of two real balls.
class ComplexBall {
 public:
  ComplexBall() : re_(0L, kMinPrecision), im_(0L, kMinPrecision) {}
  explicit ComplexBall(BallReal re) : re_(std::move(re)), im_(0L, re_.precision()) {}
  ComplexBall(BallReal re, BallReal im) : re_(std::move(re)), im_(std::move(im)) {}

  const BallReal& re() const { return re_; }
  const BallReal& im() const { return im_; }
  Precision precision() const { return std::max(re_.precision(), im_.precision()); }
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool is_exact_zero() const { return re_.is_exact_zero() && im_.is_exact_zero(); }
  /// Certified nonzero: the rectangle excludes the origin.
  bool is_nonzero() const { return !contains_zero(); }

  ComplexBall conj() const { return {re_, -im_}; }
  BallReal abs2() const { return sqr(re_) + sqr(im_); }
  BallReal abs() const { return sqrt_nonneg(abs2()); }

  ComplexBall operator-() const { return {-re_, -im_}; }
  ComplexBall& operator+=(const ComplexBall& o);
  ComplexBall& operator-=(const ComplexBall& o);
  ComplexBall& operator*=(const ComplexBall& o);
  ComplexBall& operator*=(const BallReal& o);
  ComplexBall& operator/=(const ComplexBall& o);

  friend ComplexBall operator+(ComplexBall a, const ComplexBall& b) { return a += b; }
  friend ComplexBall operator-(ComplexBall a, const ComplexBall& b) { return a -= b; }
  friend ComplexBall operator*(ComplexBall a, const ComplexBall& b) { return a *= b; }
  friend ComplexBall operator*(ComplexBall a, const BallReal& b) { return a *= b; }
  friend ComplexBall operator/(ComplexBall a, const ComplexBall& b) { return a /= b; }

  std::string to_string(int digits = 20) const;

 private:
  BallReal re_;
  BallReal im_;
};

/// Exact value of a finite dyadic endpoint.
Rational to_rational(const detail::Mpfr& v);

/// Exact decimal or fraction literal: "-12", "3/7", "2.718", "1.5e-3".
Rational parse_rational(std::string_view text);

/// Decimal real with an explicit digit count. A trailing "..." (or the
/// unicode ellipsis) marks a truncated expansion, giving radius one unit in
/// the last digit; otherwise the literal is exact and rounded outward.
BallReal parse_decimal_ball(std::string_view text, Precision p);

/// Hexadecimal dyadic form "[lo,hi]@prec", bit-exact round trip.
std::string to_hex(const BallReal& x);
BallReal ball_from_hex(std::string_view text);
std::string hex_endpoint(const detail::Mpfr& v);
BallReal ball_from_hex_endpoints(std::string_view lo, std::string_view hi, Precision p);

/// Precision schedule used by callers that retry on BallStraddlesZero.
struct PrecisionPolicy {
  Precision start = kDefaultPrecision;
  Precision cap = kMaxPrecision;
};

/// Runs fn(p) for p = start, 2*start, ... until it stops throwing one of the
/// precision-related errors; past the cap throws PrecisionExhausted.
template <class Fn>
auto with_precision_retry(const PrecisionPolicy& policy, Fn&& fn) -> decltype(fn(Precision{})) {
  for (Precision p = policy.start;; p *= 2) {
    try {
      return fn(p);
    } catch (const Error& e) {
      const bool retryable = e.kind() == ErrorKind::BallStraddlesZero ||
                             e.kind() == ErrorKind::IndeterminateComparison ||
                             e.kind() == ErrorKind::IndeterminateBranch ||
                             e.kind() == ErrorKind::PrecisionExhausted;
      if (!retryable) throw;
      if (p * 2 > policy.cap)
        fail(ErrorKind::PrecisionExhausted,
             "still failing at " + std::to_string(p) + " bits: " + e.what());
    }
  }
}

}  // namespace dioph
