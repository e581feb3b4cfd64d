#include "dioph/linalg.hpp"

#include <utility>

namespace dioph {

std::vector<size_t> rref(RatMatrix& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(RatMatrix m) { return rref(m).size(); }

std::vector<RatVector> kernel(RatMatrix m, size_t cols) {
  std::vector<RatVector> out;
  if (m.empty()) {
    for (size_t c = 0; c < cols; ++c) {
      RatVector v(cols, Rational(0));
      v[c] = 1;
      out.push_back(v);
    }
    return out;
  }
  auto pivots = rref(m);
  std::vector<int> pivot_row(cols, -1);
  for (size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<int>(i);
  for (size_t free = 0; free < cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    out.push_back(v);
  }
  return out;
}

Rational determinant(RatMatrix m) {
  const size_t n = m.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

Integer bareiss_determinant(IntMatrix m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

RatVector solve(RatMatrix m, RatVector b) {
  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i) m[i].push_back(b[i]);
  auto pivots = rref(m);
  if (pivots.size() != n || pivots.back() != n - 1)
    fail(ErrorKind::SingularGram, "linear system is singular");
  RatVector x(n);
  for (size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

IntMatrix identity_matrix(size_t n) {
  IntMatrix u(n, IntVector(n, Integer(0)));
  for (size_t i = 0; i < n; ++i) u[i][i] = 1;
  return u;
}

HermiteResult hermite_rows(const IntMatrix& a) {
  HermiteResult res;
  res.h = a;
  const size_t rows = a.size();
  res.u = identity_matrix(rows);
  if (rows == 0) return res;
  const size_t cols = a[0].size();
  auto& h = res.h;
  auto& u = res.u;
  auto combine = [&](size_t i, size_t j, const Integer& a11, const Integer& a12,
                     const Integer& a21, const Integer& a22) {
    // (row_i, row_j) <- (a11 row_i + a12 row_j, a21 row_i + a22 row_j)
    for (auto* mat : {&h, &u}) {
      auto& m = *mat;
      for (size_t c = 0; c < m[i].size(); ++c) {
        Integer x = m[i][c], y = m[j][c];
        m[i][c] = a11 * x + a12 * y;
        m[j][c] = a21 * x + a22 * y;
      }
    }
  };
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    for (size_t i = r + 1; i < rows; ++i) {
      if (h[i][c] == 0) continue;
      if (h[r][c] == 0) {
        std::swap(h[r], h[i]);
        std::swap(u[r], u[i]);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[r][c].get_mpz_t(), h[i][c].get_mpz_t());
      Integer ar = h[r][c] / g, ai = h[i][c] / g;
      // [s t; -ai ar] has determinant s*ar + t*ai = 1.
      combine(r, i, s, t, -ai, ar);
    }
    if (h[r][c] == 0) continue;
    if (h[r][c] < 0) {
      for (auto& x : h[r]) x = -x;
      for (auto& x : u[r]) x = -x;
    }
    for (size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h[i][c].get_mpz_t(), h[r][c].get_mpz_t());
      if (q == 0) continue;
      for (size_t k = 0; k < cols; ++k) h[i][k] -= q * h[r][k];
      for (size_t k = 0; k < rows; ++k) u[i][k] -= q * u[r][k];
    }
    ++r;
  }
  res.rank = r;
  return res;
}

}  // namespace dioph
