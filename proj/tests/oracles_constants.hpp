#pragma once

// Independent evaluation of the approximation-cycle constants, written
// directly from the recurrences with plain loops over gmp rationals.

#include <map>
#include <string>

#include <gmpxx.h>

namespace oracle {

struct ConstantInputs {
  int t;
  long N;
  mpq_class a;
  long m;
  mpq_class c1, c2, d;
};

inline std::map<std::string, mpq_class> constants(const ConstantInputs& in) {
  std::map<std::string, mpq_class> out;
  auto key = [](const char* name, int s) { return std::string(name) + "_" + std::to_string(s); };
  auto power = [](mpq_class x, int k) {
    mpq_class r = 1;
    while (k-- > 0) r *= x;
    return r;
  };
  auto fact = [](int k) {
    mpq_class r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  const int t = in.t;
  mpq_class nbar[16], n[16], a[16], mbar[16], m[16], bbar[16], b[16];
  nbar[0] = 1;
  nbar[1] = 1;
  for (int s = 2; s <= t + 1; ++s) nbar[s] = mpq_class(in.N) * in.m * power(mpq_class(2 * (1 + in.m)), s - 2);
  n[1] = nbar[1];
  a[1] = in.a;
  for (int s = 1; s <= t - 1; ++s) {
    n[s + 1] = nbar[s + 1] * n[s];
    a[s + 1] = 6 * in.a * nbar[s + 1] * n[s] + a[s] * nbar[s + 1] + in.d * n[s] * nbar[s + 1];
  }
  for (int s = 0; s <= t; ++s) mbar[s] = nbar[s + 1] + 8 * nbar[s] + 1;
  for (int s = 0; s <= t; ++s) {
    m[s] = 1;
    for (int i = s; i <= t; ++i) m[s] *= mbar[i];
  }
  const mpq_class Nt = power(mpq_class(in.N), t);
  bbar[1] = Nt / fact(t);
  for (int s = 2; s <= t; ++s) {
    mpq_class x = 1 / (power(2, t + 1) * fact(t - s));
    bbar[s] = Nt * (x < in.c1 ? x : in.c1);
  }
  b[1] = bbar[1];
  for (int s = 2; s <= t; ++s) {
    mpq_class v = b[s - 1] / (16 * nbar[s]);
    for (int r = 1; r <= s - 1; ++r) {
      mpq_class w = bbar[r] * m[s] * a[r] / (m[r] * a[s]);
      if (w < v) v = w;
    }
    b[s] = v;
  }
  for (int s = 0; s <= t + 1; ++s) out[key("nbar", s)] = nbar[s];
  for (int s = 1; s <= t; ++s) {
    out[key("n", s)] = n[s];
    out[key("a", s)] = a[s];
    out[key("bbar", s)] = bbar[s];
    out[key("b", s)] = b[s];
  }
  for (int s = 0; s <= t; ++s) {
    out[key("mbar", s)] = mbar[s];
    out[key("m", s)] = m[s];
  }
  mpq_class q = 8 * nbar[t] / b[t];
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  out["n"] = mpq_class(fl + 1);
  return out;
}

}  // namespace oracle
