#ifndef VORBOUND_LATTICE_BOUNDS_HPP
#define VORBOUND_LATTICE_BOUNDS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vorbound/errors.hpp"
#include "vorbound/logvalue.hpp"
#include "vorbound/quadrature.hpp"
#include "vorbound/specfun.hpp"

namespace vorbound::lattice_bounds {

using specfun::kEulerGamma;
using specfun::kPi;

// A bound value that may have been clamped into [0,1].  `raw` keeps the
// unclamped formula value; several of the covering-type bounds are vacuous
// (negative) at small radius or small n.
struct BoundValue {
  double value = 0.0;
  double raw = 0.0;
  bool clamped = false;
};

inline BoundValue clamp01(double raw) {
  BoundValue b;
  b.raw = raw;
  b.value = raw;
  if (raw < 0.0) {
    b.value = 0.0;
    b.clamped = true;
  } else if (raw > 1.0) {
    b.value = 1.0;
    b.clamped = true;
  }
  return b;
}

// Monotone grid of radii with CDF values.
struct CdfCurve {
  std::vector<double> radii;
  std::vector<double> values;
  std::string label;
  int n = 0;
};

struct AwgnParams {
  int n;
  double sigma2;
  AwgnParams(int n_, double sigma2_) : n(n_), sigma2(sigma2_) {
    if (n < 1 || !(sigma2 > 0.0)) throw domain_error("AwgnParams: need n >= 1, sigma2 > 0");
  }
};

// eta_n = (n/8) ln(4/3) and the derived event threshold 4 n^2 eta.
struct EtaConst {
  int n;
  double eta;
  explicit EtaConst(int n_) : n(n_), eta(n_ / 8.0 * std::log(4.0 / 3.0)) {
    if (n < 1) throw domain_error("EtaConst: need n >= 1");
  }
  double event_threshold() const { return 4.0 * static_cast<double>(n) * n * eta; }
};

// log of (r/r_eff)^n, the volume of the radius-r ball.
inline double log_ball_mass(int n, double r) {
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return n * (std::log(r) - std::log(specfun::r_eff(n)));
}

// CDF of the norm of a uniform point on the unit-volume ball: min{(r/r_eff)^n, 1}.
inline double g_ball(int n, double r) {
  if (n < 1 || r < 0.0) throw domain_error("g_ball: need n >= 1, r >= 0");
  if (r == 0.0) return 0.0;
  double lx = log_ball_mass(n, r);
  if (lx >= 0.0) return 1.0;
  return std::exp(lx);
}

// x/(1+x) evaluated from log(x), stable for any magnitude.
inline double ratio_from_log(double lx) {
  if (lx <= 0.0) return std::exp(lx - std::log1p(std::exp(lx)));
  return 1.0 / (1.0 + std::exp(-lx));
}

// Jensen lower bound on the expected Voronoi spherical CDF: x/(1+x), x = (r/r_eff)^n.
inline double g_jensen(int n, double r) {
  if (n < 1 || r < 0.0) throw domain_error("g_jensen: need n >= 1, r >= 0");
  if (r == 0.0) return 0.0;
  return ratio_from_log(log_ball_mass(n, r));
}

// Covering-conditioned lower bound (three pieces, needs n >= 13).
inline BoundValue g_covering(int n, double r) {
  if (n < 13) throw domain_error("g_covering: bound only asserted for n >= 13");
  if (r < 0.0) throw domain_error("g_covering: need r >= 0");
  EtaConst ec(n);
  double lx = log_ball_mass(n, r);
  double x = std::exp(std::min(lx, 709.0));
  if (x >= ec.event_threshold()) return clamp01(1.0);
  if (x >= 0.5 * ec.eta) return clamp01(1.0 - 24.0 * std::exp(-0.5 * ec.eta));
  return clamp01(1.0 - std::exp(-x) - 23.0 * std::exp(-0.5 * ec.eta));
}

// Rogers-type lower bound, valid while (r/r_eff)^n <= eta.
inline BoundValue g_rogers_lower(int n, double r) {
  if (n < 1 || r < 0.0) throw domain_error("g_rogers_lower: need n >= 1, r >= 0");
  EtaConst ec(n);
  double lx = log_ball_mass(n, r);
  double x = std::exp(std::min(lx, 709.0));
  if (x > ec.eta) throw domain_error("g_rogers_lower: outside domain (r/r_eff)^n <= eta");
  return clamp01(1.0 - std::exp(-x) - 7.0 * std::exp(-ec.eta));
}

// NSM of the unit-volume ball, G*_n = 1/((n+2) V_n^{2/n}).
inline double nsm_ball(int n) {
  if (n < 1) throw domain_error("nsm_ball: need n >= 1");
  return std::exp(-2.0 * specfun::log_ball_volume(n) / n) / (n + 2.0);
}

// Expected-NSM upper bound over the Haar-Siegel ensemble:
// (1/(n V_n^{2/n})) / sinc(2/n).  The defining integral diverges for n <= 2.
inline double nsm_upper(int n) {
  if (n <= 2) throw domain_error("nsm_upper: divergent for n <= 2");
  return std::exp(-2.0 * specfun::log_ball_volume(n) / n) / (n * specfun::sinc(2.0 / n));
}

// p-th moment analogue: (1/(n V_{p,n}^{p/n})) / sinc(p/n), needs n > p.
inline double npm_upper(int n, double p) {
  if (!(p > 0.0)) throw domain_error("npm_upper: need p > 0");
  if (!(n > p)) throw domain_error("npm_upper: divergent unless n > p");
  double lv = specfun::ball_volume(n, p).log_mag;
  return std::exp(-p * lv / n) / (n * specfun::sinc(p / n));
}

// Markov tail for the NSM: Pr(G_L >= (1+kappa) G*_n) <= min{1, 4/(kappa n)}, n >= 8.
inline double nsm_tail(int n, double kappa) {
  if (n < 8) throw domain_error("nsm_tail: bound only asserted for n >= 8");
  if (!(kappa > 0.0)) throw domain_error("nsm_tail: need kappa > 0");
  return std::min(1.0, 4.0 / (kappa * n));
}

// p-th moment tail: Pr(G^(p) > (1+kappa) G*_{n,p}) <= min{1, 2p/(kappa n)}, n >= 4p.
inline double npm_tail(int n, double p, double kappa) {
  if (!(p > 0.0) || !(kappa > 0.0)) throw domain_error("npm_tail: need p, kappa > 0");
  if (n < 4.0 * p) throw domain_error("npm_tail: bound only asserted for n >= 4p");
  return std::min(1.0, 2.0 * p / (kappa * n));
}

// Zador upper bound Gamma(1+2/n)/(n V_n^{2/n}).
inline double nsm_zador(int n) {
  if (n < 1) throw domain_error("nsm_zador: need n >= 1");
  return std::exp(specfun::log_gamma(1.0 + 2.0 / n) - 2.0 * specfun::log_ball_volume(n) / n) / n;
}

// Lattice variant: adds 60 n e^{-eta/2} inside the parentheses; needs n >= 13.
inline double nsm_zador_lattice(int n) {
  if (n < 13) throw domain_error("nsm_zador_lattice: bound only asserted for n >= 13");
  EtaConst ec(n);
  double inner = std::exp(specfun::log_gamma(1.0 + 2.0 / n)) + 60.0 * n * std::exp(-0.5 * ec.eta);
  return inner * std::exp(-2.0 * specfun::log_ball_volume(n) / n) / n;
}

// Conway-Sloane conjectured lower bound, assembled in the log domain with the
// Rogers approximation of the Schlafli function.
inline double nsm_cs_lower(int n) {
  if (n < 2) throw domain_error("nsm_cs_lower: need n >= 2");
  double hn2 = specfun::harmonic(n + 2);
  double front = n + 3.0 - 2.0 * hn2;
  if (!(front > 0.0)) throw numeric_error("nsm_cs_lower: leading factor not positive");
  double lg = std::log(front) - std::log(4.0 * n * (n + 1.0)) + std::log(n + 1.0) / n +
              4.0 / n * specfun::log_gamma(n + 1.0) + 2.0 / n * specfun::schlafli_rogers(n).log_mag;
  return std::exp(lg);
}

// Asymptotic expansions of ln(Zador bound) and ln(CS bound):
// first  = -ln(2 pi) - 1 + (ln(pi n) - 2 gamma)/n
// second = first - 2 ln^2(n)/n^2
inline std::pair<double, double> zador_cs_expansions(int n) {
  if (n < 8) throw domain_error("zador_cs_expansions: need n >= 8");
  double e1 = -std::log(2.0 * kPi) - 1.0 + (std::log(kPi * n) - 2.0 * kEulerGamma) / n;
  double ln = std::log(static_cast<double>(n));
  return {e1, e1 - 2.0 * ln * ln / (static_cast<double>(n) * n)};
}

// P^SP(sigma^2) = Pr(||sigma Z|| > r_eff) = chi2_sf(n, r_eff^2 / sigma^2).
inline double pe_sphere_packing(const AwgnParams& params) {
  double re = specfun::r_eff(params.n);
  return specfun::chi2_sf(params.n, re * re / params.sigma2);
}

namespace detail {

// min{x, 1/x} / (1+x) from t = ln x, stable at both extremes.
inline double min_ratio_term(double t) {
  if (t <= 0.0) return std::exp(t - std::log1p(std::exp(t)));
  return std::exp(-2.0 * t - std::log1p(std::exp(-t)));
}

}  // namespace detail

// New AWGN bound: P^SP + E_W[min{X_W, 1/X_W}/(1+X_W)], W ~ chi^2_{n+2},
// X_W = (sigma sqrt(W)/r_eff)^n.  Deterministic adaptive quadrature over the
// interval holding all but 1e-12 of the chi-squared mass, split at X = 1.
inline BoundValue pe_new_awgn(const AwgnParams& params, double rel_tol = 1e-9) {
  const int n = params.n;
  const double lre = -specfun::log_ball_volume(n) / n;
  const double lsig = 0.5 * std::log(params.sigma2);
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    double t = n * (lsig + 0.5 * std::log(w) - lre);
    return std::exp(specfun::chi2_log_pdf(n + 2, w)) * detail::min_ratio_term(t);
  };
  const double w_lo = quadrature::chi2_quantile(n + 2, 5e-13);
  const double w_hi = quadrature::chi2_quantile(n + 2, 1.0 - 5e-13);
  const double w_knee = std::exp(2.0 * (lre - lsig));  // X = 1
  double add = 0.0;
  if (w_knee > w_lo && w_knee < w_hi) {
    add = quadrature::integrate(integrand, w_lo, w_knee, rel_tol) +
          quadrature::integrate(integrand, w_knee, w_hi, rel_tol);
  } else {
    add = quadrature::integrate(integrand, w_lo, w_hi, rel_tol);
  }
  return clamp01(pe_sphere_packing(params) + add);
}

// Benchmark MLB bound: E[min{(sigma^2 Z/r_eff^2)^{n/2}, 1}], Z ~ chi^2_n,
// evaluated as chi2_sf(n, r_eff^2/sigma^2) + E[X 1{X <= 1}].
inline BoundValue pe_mlb_awgn(const AwgnParams& params, double rel_tol = 1e-9) {
  const int n = params.n;
  const double lre = -specfun::log_ball_volume(n) / n;
  const double lsig = 0.5 * std::log(params.sigma2);
  const double w_knee = std::exp(2.0 * (lre - lsig));  // X = 1
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    double t = n * (lsig + 0.5 * std::log(w) - lre);
    return std::exp(specfun::chi2_log_pdf(n, w) + t);
  };
  const double w_lo = quadrature::chi2_quantile(n, 5e-13);
  const double w_hi = std::min(w_knee, quadrature::chi2_quantile(n, 1.0 - 5e-13));
  double add = 0.0;
  if (w_hi > w_lo) add = quadrature::integrate(integrand, w_lo, w_hi, rel_tol);
  return clamp01(specfun::chi2_sf(n, w_knee) + add);
}

// Gaussian-measure identity (substrate for the acceptance identity suite):
// for K = ball of radius rho, mu_{sigma^2}(K) as the chi^2_{n+2} expectation
// E[g_K(sqrt(sigma^2 W)) / (sigma^2 W / rho^2)^{n/2}].
inline double gaussian_ball_measure_via_expectation(int n, double rho, double sigma2,
                                                    double rel_tol = 1e-10) {
  if (n < 1 || !(rho > 0.0) || !(sigma2 > 0.0))
    throw domain_error("gaussian_ball_measure_via_expectation: bad parameters");
  const double lrho = std::log(rho);
  const double lsig = 0.5 * std::log(sigma2);
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    double t = n * (lsig + 0.5 * std::log(w) - lrho);  // ln X
    // g_K(sqrt(sigma^2 w)) / X = min{X,1}/X = min{1, 1/X}
    double factor = t <= 0.0 ? 1.0 : std::exp(-t);
    return std::exp(specfun::chi2_log_pdf(n + 2, w)) * factor;
  };
  const double w_lo = quadrature::chi2_quantile(n + 2, 1e-14);
  const double w_hi = quadrature::chi2_quantile(n + 2, 1.0 - 1e-14);
  const double w_knee = std::exp(2.0 * (lrho - lsig));
  if (w_knee > w_lo && w_knee < w_hi) {
    return quadrature::integrate(integrand, w_lo, w_knee, rel_tol) +
           quadrature::integrate(integrand, w_knee, w_hi, rel_tol);
  }
  return quadrature::integrate(integrand, w_lo, w_hi, rel_tol);
}

}  // namespace vorbound::lattice_bounds

#endif
