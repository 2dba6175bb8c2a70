#ifndef VORBOUND_BIGCOUNT_HPP
#define VORBOUND_BIGCOUNT_HPP

#include <gmpxx.h>

#include <cmath>
#include <vector>

#include "vorbound/errors.hpp"

namespace vorbound {

// Exact nonnegative counts (Hamming-ball sizes, subspace counts) and exact
// rationals are backed by GMP.  Nothing downstream may ever round these.
using BigCount = mpz_class;
using Rational = mpq_class;

// C(n, r), exact.
inline BigCount binomial_exact(long n, long r) {
  if (n < 0 || r < 0 || r > n) throw domain_error("binomial_exact: need 0 <= r <= n");
  BigCount out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

// V_{n,r} = sum_{j<=r} C(n,j), the size of the radius-r Hamming ball in F_2^n.
inline BigCount hamming_ball(long n, long r) {
  if (n < 1 || r < 0 || r > n) throw domain_error("hamming_ball: need 1 <= n, 0 <= r <= n");
  BigCount sum = 0;
  BigCount c = 1;  // C(n, 0)
  for (long j = 0; j <= r; ++j) {
    sum += c;
    c *= (n - j);
    c /= (j + 1);
  }
  return sum;
}

// Full table V_{n,0..n}, one incremental pass.
inline std::vector<BigCount> hamming_ball_table(long n) {
  if (n < 1) throw domain_error("hamming_ball_table: need n >= 1");
  std::vector<BigCount> v(static_cast<size_t>(n) + 1);
  BigCount sum = 0;
  BigCount c = 1;
  for (long j = 0; j <= n; ++j) {
    sum += c;
    v[static_cast<size_t>(j)] = sum;
    c *= (n - j);
    c /= (j + 1);
  }
  return v;
}

// Number of k-dimensional subspaces of F_2^n (Gaussian binomial at q=2).
inline BigCount gaussian_binomial(long n, long k) {
  if (k < 0 || k > n) throw domain_error("gaussian_binomial: need 0 <= k <= n");
  BigCount num = 1, den = 1;
  BigCount two = 2;
  for (long i = 0; i < k; ++i) {
    BigCount p2n, p2k;
    mpz_pow_ui(p2n.get_mpz_t(), two.get_mpz_t(), static_cast<unsigned long>(n - i));
    mpz_pow_ui(p2k.get_mpz_t(), two.get_mpz_t(), static_cast<unsigned long>(k - i));
    num *= (p2n - 1);
    den *= (p2k - 1);
  }
  return num / den;
}

inline BigCount pow2(long e) {
  if (e < 0) throw domain_error("pow2: negative exponent");
  BigCount out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return out;
}

// Natural log of a positive big integer, exact mantissa/exponent split so the
// result is accurate to double precision at any size.
inline double log_bigcount(const BigCount& v) {
  if (v <= 0) throw domain_error("log_bigcount: need positive value");
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * 0.6931471805599453094172321214581766;
}

inline double to_double(const Rational& q) { return q.get_d(); }

// mpq arithmetic requires canonical operands; route every num/den
// construction through here.
inline Rational make_ratio(const BigCount& num, const BigCount& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace vorbound

#endif
