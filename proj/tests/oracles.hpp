#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dioph/linalg.hpp"

namespace oracle {

using dioph::Integer;
using dioph::IntMatrix;
using dioph::IntVector;
using dioph::Rational;
using dioph::RatMatrix;

/// Exact squared length of the shortest nonzero vector of the lattice with
/// the given (rational, positive definite) Gram, by Fincke-Pohst enumeration
/// in exact rational arithmetic.
inline Rational shortest_vector_norm2(const RatMatrix& gram) {
  const size_t n = gram.size();
  // Quadratic-form decomposition: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
  RatMatrix q = gram;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] = q[i][j] / q[i][i];
    }
    for (size_t k = i + 1; k < n; ++k)
      for (size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  // Start the bound at the smallest diagonal entry (a lattice vector).
  Rational bound = gram[0][0];
  for (size_t i = 1; i < n; ++i)
    if (gram[i][i] < bound) bound = gram[i][i];
  std::vector<Integer> x(n, Integer(0));
  std::function<void(int, Rational)> rec = [&](int i, Rational used) {
    // centre c_i = -sum_{j>i} q_ij x_j
    Rational c = 0;
    for (size_t j = i + 1; j < n; ++j) c -= q[i][j] * x[j];
    Rational rem = bound - used;
    if (rem < 0) return;
    // |x_i - c| <= sqrt(rem / q_ii)
    double r = std::sqrt(Rational(rem / q[i][i]).get_d()) + 1e-9;
    double cd = c.get_d();
    long lo = static_cast<long>(std::ceil(cd - r)), hi = static_cast<long>(std::floor(cd + r));
    for (long v = lo; v <= hi; ++v) {
      x[i] = v;
      Rational diff = Rational(v) - c;
      Rational u = used + q[i][i] * diff * diff;
      if (u > bound) continue;
      if (i == 0) {
        bool zero = true;
        for (const auto& e : x) zero &= e == 0;
        if (!zero && u < bound) bound = u;
      } else {
        rec(i - 1, u);
      }
    }
    x[i] = 0;
  };
  rec(static_cast<int>(n) - 1, 0);
  return bound;
}

/// Resultant over Q by the Euclidean recursion
/// Res(a, b) = (-1)^{mn} lc(b)^{m-k} Res(b, a mod b), k = deg(a mod b).
inline Rational euclid_resultant(std::vector<Rational> a, std::vector<Rational> b) {
  auto trim = [](std::vector<Rational>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  const long m = static_cast<long>(a.size()) - 1, n = static_cast<long>(b.size()) - 1;
  if (n == 0) {
    Rational r = 1;
    for (long i = 0; i < m; ++i) r *= b[0];
    return r;
  }
  if (m < n) {
    Rational r = euclid_resultant(b, a);
    return (m * n) % 2 ? Rational(-r) : r;
  }
  std::vector<Rational> rem = a;
  while (rem.size() >= b.size() && !rem.empty()) {
    Rational c = rem.back() / b.back();
    size_t shift = rem.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j) rem[shift + j] -= c * b[j];
    rem.pop_back();
    trim(rem);
  }
  if (rem.empty()) return 0;
  const long k = static_cast<long>(rem.size()) - 1;
  Rational r = euclid_resultant(b, rem);
  for (long i = 0; i < m - k; ++i) r *= b.back();
  return (m * n) % 2 ? Rational(-r) : r;
}

/// log Mahler measure by Jensen's formula: the mean of log |p| on the unit
/// circle, trapezoid rule in long double.
inline double jensen_log_mahler(const std::vector<Integer>& p, int samples = 1 << 14) {
  long double acc = 0;
  for (int k = 0; k < samples; ++k) {
    long double th = 2 * 3.14159265358979323846264338327950288L * (k + 0.5L) / samples;
    std::complex<long double> z(std::cos(th), std::sin(th)), v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * z + static_cast<long double>(p[i].get_d());
    acc += std::log(std::abs(v));
  }
  return static_cast<double>(acc / samples);
}

/// Roots by Durand-Kerner in long double.
inline std::vector<std::complex<long double>> durand_kerner(const std::vector<Integer>& p) {
  const size_t n = p.size() - 1;
  std::vector<std::complex<long double>> c;
  for (const auto& x : p) c.push_back(static_cast<long double>(x.get_d()) / static_cast<long double>(p.back().get_d()));
  std::vector<std::complex<long double>> z(n);
  for (size_t i = 0; i < n; ++i) z[i] = std::pow(std::complex<long double>(0.4L, 0.9L), static_cast<int>(i));
  for (int it = 0; it < 2000; ++it)
    for (size_t i = 0; i < n; ++i) {
      std::complex<long double> v = 0, d = 1;
      for (size_t k = p.size(); k-- > 0;) v = v * z[i] + c[k];
      for (size_t j = 0; j < n; ++j)
        if (j != i) d *= z[i] - z[j];
      z[i] -= v / d;
    }
  return z;
}

struct BoxOptimum {
  double log_eval = HUGE_VAL;
  /// Coefficients of x0^(D-k) x1^k.
  std::vector<long> coeffs;
};

/// Smallest log |f(u)| over nonzero binary forms of degree D with integer
/// coefficients in [-box, box] and log ||f||_L2 <= length_budget, where
/// u = (1, x) / |(1, x)|. Plain enumeration in long double.
inline BoxOptimum exhaustive_binary_eval(int D, long box, long double x, double length_budget) {
  const long double nu = std::sqrt(1 + x * x);
  std::vector<long double> mono(D + 1), weight(D + 1);
  long double fact_total = 1;
  for (int i = 2; i <= D + 1; ++i) fact_total *= i;
  for (int k = 0; k <= D; ++k) {
    mono[k] = std::pow(1 / nu, D - k) * std::pow(x / nu, k);
    long double w = 1;
    for (int i = 2; i <= k; ++i) w *= i;
    for (int i = 2; i <= D - k; ++i) w *= i;
    weight[k] = w / fact_total;
  }
  const long double norm_cap = std::exp(2.0L * length_budget);
  BoxOptimum best;
  std::vector<long> c(D + 1, -box);
  for (;;) {
    long double v = 0, n2 = 0;
    bool nonzero = false;
    for (int k = 0; k <= D; ++k) {
      v += c[k] * mono[k];
      n2 += c[k] * c[k] * weight[k];
      nonzero |= c[k] != 0;
    }
    if (nonzero && n2 <= norm_cap) {
      double lv = static_cast<double>(std::log(std::fabs(v)));
      if (lv < best.log_eval) {
        best.log_eval = lv;
        best.coeffs = c;
      }
    }
    int k = 0;
    while (k <= D && c[k] == box) c[k++] = -box;
    if (k > D) break;
    ++c[k];
  }
  return best;
}

}  // namespace oracle
