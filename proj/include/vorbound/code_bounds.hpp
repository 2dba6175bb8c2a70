#ifndef VORBOUND_CODE_BOUNDS_HPP
#define VORBOUND_CODE_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "vorbound/bigcount.hpp"
#include "vorbound/errors.hpp"
#include "vorbound/lattice_bounds.hpp"
#include "vorbound/specfun.hpp"

namespace vorbound::code_bounds {

using lattice_bounds::BoundValue;
using lattice_bounds::clamp01;

struct CodeParams {
  int n;
  int k;
  double p;  // crossover probability where applicable, NaN otherwise
  CodeParams(int n_, int k_, double p_ = std::numeric_limits<double>::quiet_NaN())
      : n(n_), k(k_), p(p_) {
    if (n < 1 || k < 0 || k > n) throw domain_error("CodeParams: need 0 <= k <= n, n >= 1");
  }
  // x_r = 2^{k-n} V_{n,r}, exact.
  Rational x_r_exact(int r) const { return make_ratio(hamming_ball(n, r), pow2(n - k)); }
};

namespace detail {

inline void check_nk(int n, int k) {
  if (n < 1 || k < 0 || k > n) throw domain_error("code bound: need 0 <= k <= n, n >= 1");
}

inline void check_p_open(double p) {
  if (!(p > 0.0) || !(p < 0.5)) throw domain_error("code bound: need p in (0, 1/2)");
}

// ln C(n, r) for r = 0..n.
inline std::vector<double> log_binomial_table(int n) {
  std::vector<double> lc(static_cast<size_t>(n) + 1);
  double lg = specfun::log_gamma(n + 1.0);
  for (int r = 0; r <= n; ++r)
    lc[static_cast<size_t>(r)] = lg - specfun::log_gamma(r + 1.0) - specfun::log_gamma(n - r + 1.0);
  return lc;
}

// ln V_{n,r} for r = 0..n via running log-sum-exp.
inline std::vector<double> log_hamming_ball_table(int n) {
  auto lc = log_binomial_table(n);
  std::vector<double> lv(static_cast<size_t>(n) + 1);
  double acc = lc[0];
  lv[0] = acc;
  for (int r = 1; r <= n; ++r) {
    double a = std::max(acc, lc[static_cast<size_t>(r)]);
    double b = std::min(acc, lc[static_cast<size_t>(r)]);
    acc = a + std::log1p(std::exp(b - a));
    lv[static_cast<size_t>(r)] = acc;
  }
  return lv;
}

// Compensated sum, smallest magnitudes first.
inline double sum_sorted(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    double s = sum + t;
    comp += (std::fabs(sum) >= std::fabs(t)) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

// 1/(1+x) from lx = ln x.
inline double inv_one_plus(double lx) {
  if (lx >= 0.0) return std::exp(-lx - std::log1p(std::exp(-lx)));
  return std::exp(-std::log1p(std::exp(lx)));
}

// min{x, 1/x}/(1+x) from lx = ln x.
inline double min_ratio(double lx) { return lattice_bounds::detail::min_ratio_term(lx); }

// log of the above, safe against underflow at extreme lx.
inline double log_min_ratio(double lx) {
  if (lx <= 0.0) return lx - std::log1p(std::exp(lx));
  return -2.0 * lx - std::log1p(std::exp(-lx));
}

inline Rational rational_pow(const Rational& base, int e) {
  Rational out(1);
  Rational b = base;
  int k = e;
  while (k > 0) {
    if (k & 1) out *= b;
    b *= b;
    k >>= 1;
  }
  out.canonicalize();
  return out;
}

}  // namespace detail

// r_eff(n,k) = min{r : 2^{n-k} <= V_{n,r}}, exact.
inline int r_eff_code(int n, int k) {
  detail::check_nk(n, k);
  BigCount target = pow2(n - k);
  BigCount sum = 0, c = 1;
  for (int r = 0; r <= n; ++r) {
    sum += c;
    if (sum >= target) return r;
    c *= (n - r);
    c /= (r + 1);
  }
  return n;  // unreachable: V_{n,n} = 2^n >= 2^{n-k}
}

// Quasi-ball CDF min{2^{k-n} V_{n,r}, 1}, exact rational plus double.
struct QuasiBallCdf {
  Rational exact;
  double value;
};

inline QuasiBallCdf q_quasi_ball(int n, int k, int r) {
  detail::check_nk(n, k);
  if (r < 0 || r > n) throw domain_error("q_quasi_ball: need 0 <= r <= n");
  Rational x(hamming_ball(n, r), pow2(n - k));
  x.canonicalize();
  if (x > 1) x = 1;
  return {x, x.get_d()};
}

// D*_{n,k} = (1/n) sum_{r < r_eff} (1 - 2^{k-n} V_{n,r}), exact for any n
// (single shared denominator n 2^{n-k}).
inline Rational d_star_exact(int n, int k) {
  detail::check_nk(n, k);
  int re = r_eff_code(n, k);
  BigCount cell = pow2(n - k);
  BigCount num = 0;
  BigCount sum = 0, c = 1;
  for (int r = 0; r < re; ++r) {
    sum += c;
    num += cell - sum;
    c *= (n - r);
    c /= (r + 1);
  }
  Rational out(num, n * cell);
  out.canonicalize();
  return out;
}

inline double d_star(int n, int k) { return d_star_exact(n, k).get_d(); }

// Expected-distortion upper bound (1/n) sum_{r=0}^{n-1} 1/(1+x_r).
inline Rational dc_upper_exact(int n, int k) {
  detail::check_nk(n, k);
  BigCount cell = pow2(n - k);
  auto v = hamming_ball_table(n);
  Rational acc(0);
  for (int r = 0; r < n; ++r) {
    acc += make_ratio(cell, cell + v[static_cast<size_t>(r)]);
  }
  acc /= n;
  acc.canonicalize();
  return acc;
}

inline double dc_upper_log(int n, int k) {
  detail::check_nk(n, k);
  auto lv = detail::log_hamming_ball_table(n);
  const double l2 = specfun::kLn2;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r)
    terms.push_back(detail::inv_one_plus((k - n) * l2 + lv[static_cast<size_t>(r)]));
  return detail::sum_sorted(std::move(terms)) / n;
}

inline double dc_upper(int n, int k) {
  detail::check_nk(n, k);
  if (n <= 64) return dc_upper_exact(n, k).get_d();
  return dc_upper_log(n, k);
}

// Upper bound on n (E[D_C] - D*_{n,k}):
// sum_{r<r_eff} x_r^2/(1+x_r) + sum_{r=r_eff}^{n-1} 1/(1+x_r).
inline Rational delta_gap_exact(int n, int k) {
  detail::check_nk(n, k);
  int re = r_eff_code(n, k);
  BigCount cell = pow2(n - k);
  auto v = hamming_ball_table(n);
  Rational acc(0);
  for (int r = 0; r < n; ++r) {
    const BigCount& vr = v[static_cast<size_t>(r)];
    if (r < re) {
      acc += make_ratio(vr * vr, cell * (cell + vr));
    } else {
      acc += make_ratio(cell, cell + vr);
    }
  }
  acc.canonicalize();
  return acc;
}

inline double delta_gap_log(int n, int k) {
  detail::check_nk(n, k);
  int re = r_eff_code(n, k);
  auto lv = detail::log_hamming_ball_table(n);
  const double l2 = specfun::kLn2;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    double lx = (k - n) * l2 + lv[static_cast<size_t>(r)];
    if (r < re) {
      // x^2/(1+x) = exp(2 ln x - ln(1+x)); here x < 1 so ln(1+x) = log1p(e^lx).
      terms.push_back(std::exp(2.0 * lx - std::log1p(std::exp(lx))));
    } else {
      terms.push_back(detail::inv_one_plus(lx));
    }
  }
  return detail::sum_sorted(std::move(terms));
}

inline double delta_gap(int n, int k) {
  detail::check_nk(n, k);
  if (n <= 64) return delta_gap_exact(n, k).get_d();
  return delta_gap_log(n, k);
}

// Explicit constant from the constant-gap proof: 2(1-kappa)/(1-2kappa) + 1 with
// kappa = (m+1)/n, m = ceil((n/2)(h2^{-1}(1-alpha) + 1/2)).  Infinite when the
// proof's small-kappa premise fails.
inline double delta_gap_proof_bound(int n, double alpha) {
  if (n < 1 || !(alpha > 0.0) || !(alpha <= 1.0))
    throw domain_error("delta_gap_proof_bound: need n >= 1, alpha in (0,1]");
  double m = std::ceil(0.5 * n * (specfun::h2_inv(1.0 - alpha) + 0.5));
  double kappa = (m + 1.0) / n;
  if (kappa >= 0.5) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 - kappa) / (1.0 - 2.0 * kappa) + 1.0;
}

// ---------------------------------------------------------------------------
// BSC error-probability bounds
// ---------------------------------------------------------------------------

// Sphere-packing lower bound 1 - mu_p(quasi-ball), summed over the complement
// so small probabilities keep full relative accuracy.  Log-domain pmf, exact
// big-integer shell counts.
inline BoundValue pe_sp_bsc(int n, int k, double p) {
  detail::check_nk(n, k);
  detail::check_p_open(p);
  int re = r_eff_code(n, k);
  auto lc = detail::log_binomial_table(n);
  const double lp = std::log(p), lq = std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(n - re) + 1);
  for (int r = re + 1; r <= n; ++r)
    terms.push_back(std::exp(lc[static_cast<size_t>(r)] + r * lp + (n - r) * lq));
  // Weight-r_eff words excluded from the quasi-ball: V_{n,r_eff} - 2^{n-k}.
  BigCount excluded = hamming_ball(n, re) - pow2(n - k);
  if (excluded > 0)
    terms.push_back(std::exp(log_bigcount(excluded) + re * lp + (n - re) * lq));
  return clamp01(detail::sum_sorted(std::move(terms)));
}

inline Rational pe_sp_bsc_exact(int n, int k, const Rational& p) {
  detail::check_nk(n, k);
  if (!(p > 0) || !(p < Rational(1, 2))) throw domain_error("pe_sp_bsc_exact: need p in (0,1/2)");
  int re = r_eff_code(n, k);
  Rational q = Rational(1) - p;
  Rational acc(0);
  for (int r = re + 1; r <= n; ++r)
    acc += Rational(binomial_exact(n, r)) * detail::rational_pow(p, r) *
           detail::rational_pow(q, n - r);
  BigCount excluded = hamming_ball(n, re) - pow2(n - k);
  if (excluded > 0)
    acc += Rational(excluded) * detail::rational_pow(p, re) * detail::rational_pow(q, n - re);
  acc.canonicalize();
  return acc;
}

// New BSC bound: pe_sp + ((1-2p)/(1-p)) E_W[(V_{n,W}/C(n,W)) min{x_W,1/x_W}/(1+x_W)],
// W ~ Binomial(n, p).
inline BoundValue pe_new_bsc(int n, int k, double p) {
  detail::check_nk(n, k);
  detail::check_p_open(p);
  auto lc = detail::log_binomial_table(n);
  auto lv = detail::log_hamming_ball_table(n);
  const double lp = std::log(p), lq = std::log1p(-p);
  const double l2 = specfun::kLn2;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(n) + 1);
  for (int w = 0; w <= n; ++w) {
    double lpmf = lc[static_cast<size_t>(w)] + w * lp + (n - w) * lq;
    double lx = (k - n) * l2 + lv[static_cast<size_t>(w)];
    double lterm = lpmf + lv[static_cast<size_t>(w)] - lc[static_cast<size_t>(w)] +
                   detail::log_min_ratio(lx);
    terms.push_back(std::exp(lterm));
  }
  double add = (1.0 - 2.0 * p) / (1.0 - p) * detail::sum_sorted(std::move(terms));
  return clamp01(pe_sp_bsc(n, k, p).value + add);
}

inline Rational pe_new_bsc_exact(int n, int k, const Rational& p) {
  detail::check_nk(n, k);
  Rational q = Rational(1) - p;
  auto v = hamming_ball_table(n);
  BigCount cell = pow2(n - k);
  Rational acc(0);
  for (int w = 0; w <= n; ++w) {
    Rational pmf = Rational(binomial_exact(n, w)) * detail::rational_pow(p, w) *
                   detail::rational_pow(q, n - w);
    Rational x(v[static_cast<size_t>(w)], cell);
    x.canonicalize();
    Rational minr = x > 1 ? Rational(1) / x : x;
    Rational term = pmf * make_ratio(v[static_cast<size_t>(w)], binomial_exact(n, w)) * minr /
                    (Rational(1) + x);
    acc += term;
  }
  Rational out = pe_sp_bsc_exact(n, k, p) + (Rational(1) - 2 * p) / q * acc;
  out.canonicalize();
  return out;
}

// RCU benchmark: E[min{1, 2^{k-n} V_{n,W}}].
inline double rcu(int n, int k, double p) {
  detail::check_nk(n, k);
  detail::check_p_open(p);
  auto lc = detail::log_binomial_table(n);
  auto lv = detail::log_hamming_ball_table(n);
  const double lp = std::log(p), lq = std::log1p(-p);
  const double l2 = specfun::kLn2;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(n) + 1);
  for (int w = 0; w <= n; ++w) {
    double lpmf = lc[static_cast<size_t>(w)] + w * lp + (n - w) * lq;
    double lx = (k - n) * l2 + lv[static_cast<size_t>(w)];
    terms.push_back(std::exp(lpmf + std::min(lx, 0.0)));
  }
  return std::min(1.0, detail::sum_sorted(std::move(terms)));
}

inline Rational rcu_exact(int n, int k, const Rational& p) {
  detail::check_nk(n, k);
  Rational q = Rational(1) - p;
  auto v = hamming_ball_table(n);
  BigCount cell = pow2(n - k);
  Rational acc(0);
  for (int w = 0; w <= n; ++w) {
    Rational pmf = Rational(binomial_exact(n, w)) * detail::rational_pow(p, w) *
                   detail::rational_pow(q, n - w);
    Rational x = make_ratio(v[static_cast<size_t>(w)], cell);
    if (x > 1) x = 1;
    acc += pmf * x;
  }
  acc.canonicalize();
  return acc;
}

// ---------------------------------------------------------------------------
// Rate-distortion reference
// ---------------------------------------------------------------------------

// Distortion-rate function of the symmetric binary source, D(R) = h2^{-1}(1-R).
// (The classic R(D) = 1 - h2(D) inverted on D in [0, 1/2].)
inline double d_rate(double rate) {
  if (rate < 0.0 || rate > 1.0) throw domain_error("d_rate: need R in [0,1]");
  return specfun::h2_inv(1.0 - rate);
}

// Finite-n bracket D*_{n,k} <= D_n(k/n) <= dc_upper(n,k); nR must be integral.
inline std::pair<double, double> d_n_bracket(int n, double rate) {
  if (n < 1 || rate < 0.0 || rate > 1.0) throw domain_error("d_n_bracket: bad parameters");
  double kd = rate * n;
  int k = static_cast<int>(std::lround(kd));
  if (std::fabs(kd - k) > 1e-9) throw domain_error("d_n_bracket: n*R must be an integer");
  return {d_star(n, k), dc_upper(n, k)};
}

}  // namespace vorbound::code_bounds

#endif
