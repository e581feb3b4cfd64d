#include "dioph/projective.hpp"

#include <cctype>
#include <numeric>

namespace dioph {

namespace {

BallReal clamp_unit_interval(const BallReal& x) {
  detail::Mpfr lo = x.lower(), hi = x.upper();
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  if (mpfr_cmp_ui(hi.get(), 1) > 0) mpfr_set_ui(hi.get(), 1, MPFR_RNDU);
  return BallReal::from_endpoints(lo, hi);
}

std::vector<std::string> split_coordinates(std::string_view text) {
  std::string s(text);
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos || s[b] != '(' || s[e] != ')')
    fail(ErrorKind::ParseError, "point must be written as (a:b:...): " + s);
  std::string body = s.substr(b + 1, e - b - 1);
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ':' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) fail(ErrorKind::ParseError, "point needs at least two coordinates: " + s);
  return parts;
}

// Recursive-descent evaluator. Every value carries a ball; rational values
// additionally carry their exact form.
class ExprParser {
 public:
  ExprParser(std::string_view text, Precision p) : s_(text), p_(p) {}

  ExprValue run() {
    ExprValue v = sum();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in '" +
                                    std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprValue exact(const Rational& q) { return {q, ComplexBall(BallReal(q, p_))}; }
  ExprValue inexact(ComplexBall z) { return {std::nullopt, std::move(z)}; }

  ExprValue sum() {
    ExprValue v = product();
    for (;;) {
      if (eat('+')) {
        ExprValue r = product();
        v = combine(v, r, '+');
      } else if (eat('-')) {
        ExprValue r = product();
        v = combine(v, r, '-');
      } else {
        return v;
      }
    }
  }

  ExprValue product() {
    ExprValue v = unary();
    for (;;) {
      if (eat('*')) {
        ExprValue r = unary();
        v = combine(v, r, '*');
      } else if (eat('/')) {
        ExprValue r = unary();
        v = combine(v, r, '/');
      } else {
        return v;
      }
    }
  }

  ExprValue unary() {
    if (eat('-')) {
      ExprValue v = unary();
      if (v.exact) return exact(-*v.exact);
      return inexact(-v.ball);
    }
    if (eat('+')) return unary();
    return power();
  }

  ExprValue power() {
    ExprValue base = atom();
    if (!eat('^')) return base;
    ExprValue e = unary();
    if (!e.exact || e.exact->get_den() != 1 || sgn(*e.exact) < 0 || *e.exact > 100000)
      error("exponent must be a small non-negative integer");
    unsigned long n = e.exact->get_num().get_ui();
    if (base.exact) {
      Rational r = 1;
      Integer num, den;
      mpz_pow_ui(num.get_mpz_t(), base.exact->get_num_mpz_t(), n);
      mpz_pow_ui(den.get_mpz_t(), base.exact->get_den_mpz_t(), n);
      r = Rational(num, den);
      r.canonicalize();
      return exact(r);
    }
    ComplexBall acc(BallReal(1L, p_));
    ComplexBall b = base.ball;
    while (n) {
      if (n & 1) acc *= b;
      b *= b;
      n >>= 1;
    }
    return inexact(acc);
  }

  ExprValue combine(const ExprValue& a, const ExprValue& b, char op) {
    if (a.exact && b.exact) {
      switch (op) {
        case '+': return exact(*a.exact + *b.exact);
        case '-': return exact(*a.exact - *b.exact);
        case '*': return exact(*a.exact * *b.exact);
        default:
          if (sgn(*b.exact) == 0) error("division by zero");
          return exact(*a.exact / *b.exact);
      }
    }
    switch (op) {
      case '+': return inexact(a.ball + b.ball);
      case '-': return inexact(a.ball - b.ball);
      case '*': return inexact(a.ball * b.ball);
      default: return inexact(a.ball / b.ball);
    }
  }

  BallReal real_argument(const ExprValue& v, const char* fn) {
    if (!v.ball.im().is_exact_zero()) error(std::string(fn) + " needs a real argument");
    return v.ball.re();
  }

  ExprValue liouville() {
    // sum_{n >= 1} 10^{-n!}: stop once 10^{-(N+1)!} is far below 2^-p.
    Rational s = 0;
    unsigned long fact = 1;
    unsigned long n = 1;
    const double needed = static_cast<double>(p_) * 0.30103 + 4;
    for (;; ++n) {
      fact *= n;
      Integer ten;
      mpz_ui_pow_ui(ten.get_mpz_t(), 10, fact);
      s += Rational(1) / Rational(ten);
      if (static_cast<double>(fact * (n + 1)) > needed) break;
    }
    Integer tail_den;
    mpz_ui_pow_ui(tail_den.get_mpz_t(), 10, fact * (n + 1));
    Rational tail = Rational(1) / Rational(tail_den);
    return inexact(ComplexBall(BallReal::around(s + tail, tail, p_)));
  }

  ExprValue atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprValue v = sum();
      if (!eat(')')) error("expected )");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' ||
           s_[pos_ + 1] == '+')) {
        pos_ += 2;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      std::string lit(s_.substr(start, pos_ - start));
      if (s_.substr(pos_, 3) == "...") {
        pos_ += 3;
        return inexact(ComplexBall(parse_decimal_ball(lit + "...", p_)));
      }
      return exact(parse_rational(lit));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "e") return inexact(ComplexBall(eval_constant("e", p_)));
      if (name == "pi") return inexact(ComplexBall(eval_constant("pi", p_)));
      if (name == "i") return inexact(ComplexBall(BallReal(0L, p_), BallReal(1L, p_)));
      if (name == "liouville") return liouville();
      if (name == "sqrt" || name == "log" || name == "exp") {
        if (!eat('(')) error("expected ( after " + name);
        ExprValue arg = sum();
        if (!eat(')')) error("expected )");
        return apply(name, arg);
      }
      error("unknown symbol '" + name + "'");
    }
    error(std::string("unexpected character '") + c + "'");
  }

  ExprValue apply(const std::string& fn, const ExprValue& arg) {
    if (fn == "sqrt") {
      if (arg.exact && sgn(*arg.exact) >= 0 && mpz_perfect_square_p(arg.exact->get_num_mpz_t()) &&
          mpz_perfect_square_p(arg.exact->get_den_mpz_t())) {
        Integer n = ::sqrt(arg.exact->get_num()), d = ::sqrt(arg.exact->get_den());
        return exact(Rational(n, d));
      }
      return inexact(ComplexBall(sqrt(real_argument(arg, "sqrt"))));
    }
    if (fn == "log") {
      if (arg.exact && *arg.exact == 1) return exact(0);
      return inexact(ComplexBall(ball_log(real_argument(arg, "log"))));
    }
    if (arg.exact && sgn(*arg.exact) == 0) return exact(1);
    return inexact(ComplexBall(dioph::exp(real_argument(arg, "exp"))));
  }

  std::string_view s_;
  Precision p_;
  size_t pos_ = 0;
};

}  // namespace

ProjectivePoint ProjectivePoint::exact(const std::vector<Rational>& coords) {
  if (coords.size() < 2) fail(ErrorKind::DimensionMismatch, "a point needs t+1 >= 2 coordinates");
  Integer l = 1;
  for (const auto& q : coords) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> ints;
  ints.reserve(coords.size());
  for (const auto& q : coords) ints.push_back(Integer(q * l));
  return exact(ints);
}

ProjectivePoint ProjectivePoint::exact(const std::vector<Integer>& coords) {
  if (coords.size() < 2) fail(ErrorKind::DimensionMismatch, "a point needs t+1 >= 2 coordinates");
  Integer g = 0;
  for (const auto& c : coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) fail(ErrorKind::DomainError, "all coordinates are zero");
  ProjectivePoint pt;
  pt.exact_ = true;
  int sign = 0;
  for (const auto& c : coords) {
    if (sgn(c) != 0) {
      sign = sgn(c);
      break;
    }
  }
  for (const auto& c : coords) pt.ints_.push_back(Integer(c / g) * sign);
  return pt;
}

ProjectivePoint ProjectivePoint::analytic(const std::vector<ComplexBall>& coords) {
  if (coords.size() < 2) fail(ErrorKind::DimensionMismatch, "a point needs t+1 >= 2 coordinates");
  Precision p = kMaxPrecision;
  for (const auto& z : coords) p = std::min(p, z.precision());
  BallReal n2(0L, p);
  for (const auto& z : coords) n2 += z.abs2();
  if (n2.is_exact_zero()) fail(ErrorKind::DomainError, "all coordinates are zero");
  BallReal norm = sqrt(n2);
  ProjectivePoint pt;
  pt.exact_ = false;
  for (const auto& z : coords) pt.balls_.push_back(ComplexBall(z.re() / norm, z.im() / norm));
  return pt;
}

const std::vector<Integer>& ProjectivePoint::integer_coords() const {
  if (!exact_) fail(ErrorKind::PreconditionViolated, "point is not exact");
  return ints_;
}

std::vector<ComplexBall> ProjectivePoint::ball_coords(Precision p) const {
  if (!exact_) return balls_;
  std::vector<ComplexBall> out;
  out.reserve(ints_.size());
  for (const auto& c : ints_) out.emplace_back(BallReal(c, p));
  return out;
}

Precision ProjectivePoint::precision() const {
  if (exact_) return kMaxPrecision;
  Precision p = kMaxPrecision;
  for (const auto& z : balls_) p = std::min(p, z.precision());
  return p;
}

bool ProjectivePoint::operator==(const ProjectivePoint& o) const {
  return exact_ && o.exact_ && ints_ == o.ints_;
}

std::string ProjectivePoint::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < size(); ++i) {
    if (i) s += ":";
    if (exact_) {
      s += ints_[i].get_str();
    } else {
      s += balls_[i].re().to_string(12);
      if (!balls_[i].im().is_exact_zero()) s += " + i*" + balls_[i].im().to_string(12);
    }
  }
  return s + ")";
}

BallReal fs_distance(const ProjectivePoint& x, const ProjectivePoint& y, Precision p) {
  if (x.size() != y.size()) fail(ErrorKind::DimensionMismatch, "points live in different P^t");
  const size_t n = x.size();
  if (x.is_exact() && y.is_exact()) {
    const auto& a = x.integer_coords();
    const auto& b = y.integer_coords();
    Integer wedge = 0, na = 0, nb = 0;
    for (size_t i = 0; i < n; ++i) {
      na += a[i] * a[i];
      nb += b[i] * b[i];
      for (size_t j = i + 1; j < n; ++j) {
        Integer m = a[i] * b[j] - a[j] * b[i];
        wedge += m * m;
      }
    }
    if (wedge == 0) return BallReal(0L, p);
    Rational q(wedge, na * nb);
    q.canonicalize();
    return clamp_unit_interval(sqrt_nonneg(BallReal(q, p)));
  }
  auto a = x.ball_coords(p);
  auto b = y.ball_coords(p);
  BallReal wedge(0L, p), na(0L, p), nb(0L, p);
  for (size_t i = 0; i < n; ++i) {
    na += a[i].abs2();
    nb += b[i].abs2();
    for (size_t j = i + 1; j < n; ++j) wedge += (a[i] * b[j] - a[j] * b[i]).abs2();
  }
  return clamp_unit_interval(sqrt_nonneg(wedge / (na * nb)));
}

BallReal naive_height(const ProjectivePoint& x, Precision p) {
  Integer m = 0;
  for (const auto& c : x.integer_coords()) m = std::max(m, Integer(::abs(c)));
  return ball_log(BallReal(m, p));
}

BallReal fs_height(const ProjectivePoint& x, Precision p) {
  Integer n2 = 0;
  for (const auto& c : x.integer_coords()) n2 += c * c;
  return ball_log(BallReal(n2, p)) / BallReal(2L, p);
}

std::vector<ComplexBall> unit_representative(const ProjectivePoint& x, Precision p) {
  if (!x.is_exact()) return x.ball_coords(p);
  Integer n2 = 0;
  for (const auto& c : x.integer_coords()) n2 += c * c;
  BallReal norm = sqrt(BallReal(n2, p + 8));
  std::vector<ComplexBall> out;
  for (const auto& c : x.integer_coords()) {
    out.emplace_back((BallReal(c, p + 8) / norm).with_precision(p));
  }
  return out;
}

ProjectivePoint parse_exact_point(std::string_view text) {
  std::vector<Rational> coords;
  for (const auto& part : split_coordinates(text)) coords.push_back(parse_rational(part));
  return ProjectivePoint::exact(coords);
}

ExprValue evaluate_expression(std::string_view expr, Precision p) {
  return ExprParser(expr, p).run();
}

PointSpec::PointSpec(std::vector<std::string> exprs) : exprs_(std::move(exprs)) {
  if (exprs_.size() < 2) fail(ErrorKind::DimensionMismatch, "a point needs t+1 >= 2 coordinates");
  std::vector<Rational> q;
  for (const auto& e : exprs_) {
    ExprValue v = evaluate_expression(e, kMinPrecision);
    if (!v.exact) return;
    q.push_back(*v.exact);
  }
  exact_ = ProjectivePoint::exact(q);
}

PointSpec PointSpec::parse(std::string_view text) { return PointSpec(split_coordinates(text)); }

PointSpec PointSpec::from_point(const ProjectivePoint& x) {
  std::vector<std::string> e;
  for (const auto& c : x.integer_coords()) e.push_back(c.get_str());
  return PointSpec(e);
}

ProjectivePoint PointSpec::at(Precision p) const {
  if (exact_) return *exact_;
  std::vector<ComplexBall> z;
  for (const auto& e : exprs_) z.push_back(evaluate_expression(e, p + 16).ball);
  return ProjectivePoint::analytic(z);
}

std::string PointSpec::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < exprs_.size(); ++i) {
    if (i) s += ":";
    s += exprs_[i];
  }
  return s + ")";
}

}  // namespace dioph
