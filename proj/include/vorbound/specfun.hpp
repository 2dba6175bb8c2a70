#ifndef VORBOUND_SPECFUN_HPP
#define VORBOUND_SPECFUN_HPP

#include <cmath>
#include <limits>
#include <numbers>

#include "vorbound/bigcount.hpp"
#include "vorbound/errors.hpp"
#include "vorbound/logvalue.hpp"

namespace vorbound::specfun {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

// ln Gamma(z), Lanczos approximation (g = 4.7421875, 15 terms) with the
// reflection formula below z = 0.5.
inline double log_gamma(double z) {
  if (!(z > 0.0)) throw domain_error("log_gamma: need z > 0");
  static constexpr double g = 4.7421875;
  static constexpr double c[15] = {
      0.99999999999999709182,     57.156235665862923517,
      -59.597960355475491248,     14.136097974741747174,
      -0.49191381609762019978,    0.33994649984811888699e-4,
      0.46523628927048575665e-4,  -0.98374475304879564677e-4,
      0.15808870322491248884e-3,  -0.21026444172410488319e-3,
      0.21743961811521264320e-3,  -0.16431810653676389022e-3,
      0.84418223983852743293e-4,  -0.26190838401581408670e-4,
      0.36899182659531622704e-5};
  if (z < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z); z in (0, 0.5) keeps both sides positive.
    return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  double x = c[0];
  double zm1 = z - 1.0;
  for (int i = 1; i < 15; ++i) x += c[i] / (zm1 + i);
  double t = zm1 + g + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(x);
}

// Regularized lower incomplete gamma P(a, x); series for x < a+1, Lentz
// continued fraction for the complement otherwise.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw domain_error("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double lpre = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * eps) return std::exp(lpre) * sum;
    }
    throw numeric_error("gamma_p: series did not converge");
  }
  // Q(a,x) via continued fraction, then P = 1 - Q.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c2 = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c2 = b + an / c2;
    if (std::fabs(c2) < tiny) c2 = tiny;
    d = 1.0 / d;
    double del = d * c2;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return 1.0 - std::exp(lpre) * h;
  }
  throw numeric_error("gamma_p: continued fraction did not converge");
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Chi-squared CDF/SF with `dof` degrees of freedom.
inline double chi2_cdf(int dof, double x) {
  if (dof < 1) throw domain_error("chi2_cdf: need dof >= 1");
  if (x < 0.0) throw domain_error("chi2_cdf: need x >= 0");
  return gamma_p(0.5 * dof, 0.5 * x);
}

inline double chi2_sf(int dof, double x) {
  if (dof < 1) throw domain_error("chi2_sf: need dof >= 1");
  if (x < 0.0) throw domain_error("chi2_sf: need x >= 0");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * dof;
  if (x < dof + 2.0) return 1.0 - gamma_p(a, 0.5 * x);
  // Far right tail: evaluate Q directly to keep absolute accuracy.
  const double eps = std::numeric_limits<double>::epsilon();
  const double xx = 0.5 * x;
  const double lpre = a * std::log(xx) - xx - log_gamma(a);
  const double tiny = 1e-300;
  double b = xx + 1.0 - a;
  double c2 = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c2 = b + an / c2;
    if (std::fabs(c2) < tiny) c2 = tiny;
    d = 1.0 / d;
    double del = d * c2;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return std::exp(lpre) * h;
  }
  throw numeric_error("chi2_sf: continued fraction did not converge");
}

// Log-density of the chi-squared distribution.
inline double chi2_log_pdf(int dof, double x) {
  if (dof < 1 || x <= 0.0) throw domain_error("chi2_log_pdf: need dof >= 1, x > 0");
  const double a = 0.5 * dof;
  return (a - 1.0) * std::log(x) - 0.5 * x - a * kLn2 - log_gamma(a);
}

// sinc(t) = sin(pi t) / (pi t), sinc(0) = 1.
inline double sinc(double t) {
  if (t == 0.0) return 1.0;
  double pt = kPi * t;
  if (std::fabs(pt) < 1e-6) return 1.0 - pt * pt / 6.0;
  return std::sin(pt) / pt;
}

// Binary entropy in bits.
inline double h2(double p) {
  if (p < 0.0 || p > 1.0) throw domain_error("h2: need p in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

// Inverse of h2 restricted to [0, 1/2]; bisection (monotone there).
inline double h2_inv(double y) {
  if (y < 0.0 || y > 1.0) throw domain_error("h2_inv: need y in [0,1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h2(mid) < y) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// H_m = sum_{i<=m} 1/i via Neumaier-compensated summation, smallest terms first.
inline double harmonic(long m) {
  if (m < 1) throw domain_error("harmonic: need m >= 1");
  double sum = 0.0, comp = 0.0;
  for (long i = m; i >= 1; --i) {
    double t = 1.0 / static_cast<double>(i);
    double s = sum + t;
    comp += (std::fabs(sum) >= std::fabs(t)) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

// Volume of the unit l_p ball in R^n: 2^n Gamma(1+1/p)^n / Gamma(1+n/p).
// p = infinity gives the cube 2^n.  Returned in the log domain.
inline LogValue ball_volume(int n, double p = 2.0) {
  if (n < 1) throw domain_error("ball_volume: need n >= 1");
  if (!(p > 0.0)) throw domain_error("ball_volume: need p > 0");
  if (std::isinf(p)) return LogValue::from_log(n * kLn2);
  double lv;
  if (p == 2.0) {
    lv = 0.5 * n * std::log(kPi) - log_gamma(1.0 + 0.5 * n);
  } else {
    lv = n * kLn2 + n * log_gamma(1.0 + 1.0 / p) - log_gamma(1.0 + static_cast<double>(n) / p);
  }
  return LogValue::from_log(lv);
}

inline double log_ball_volume(int n) { return ball_volume(n, 2.0).log_mag; }

// r_eff = V_n^{-1/n}, the radius of the unit-volume Euclidean ball.
inline double r_eff(int n) {
  if (n < 1) throw domain_error("r_eff: need n >= 1");
  return std::exp(-log_ball_volume(n) / n);
}

// Rogers-Daniels approximation of the Schlafli function at integer argument:
//   f_n(n) ~ sqrt(n+1)/(sqrt(2) e n!) (2e/(pi n))^{n/2} (1 + 31/(12n)),
// with the O(n^-2) remainder dropped.
inline LogValue schlafli_rogers(int n) {
  if (n < 2) throw domain_error("schlafli_rogers: need n >= 2");
  double lf = 0.5 * std::log(n + 1.0) - 0.5 * kLn2 - 1.0 - log_gamma(n + 1.0) +
              0.5 * n * (1.0 + kLn2 - std::log(kPi * n)) + std::log1p(31.0 / (12.0 * n));
  return LogValue::from_log(lf);
}

}  // namespace vorbound::specfun

#endif
