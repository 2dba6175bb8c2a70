#ifndef VORBOUND_QUADRATURE_HPP
#define VORBOUND_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "vorbound/errors.hpp"
#include "vorbound/specfun.hpp"

namespace vorbound::quadrature {

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK qk15 nodes).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, integral, err;
};

template <class F>
inline Segment gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.integral = resk * h;
  s.err = std::fabs((resk - resg) * h);
  return s;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration on [a, b].  Converges when the
// summed error estimate drops below rel_tol * |integral| (plus a tiny
// absolute floor).  Throws numeric_error if the segment budget is exhausted.
template <class F>
inline double integrate(const F& f, double a, double b, double rel_tol = 1e-9,
                        double abs_floor = 1e-300, int max_segments = 4000) {
  if (!(b >= a)) throw domain_error("integrate: need b >= a");
  if (a == b) return 0.0;
  std::vector<detail::Segment> segs;
  segs.push_back(detail::gk15(f, a, b));
  for (int iter = 0; iter < max_segments; ++iter) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.integral;
      err += s.err;
    }
    if (err <= rel_tol * std::fabs(total) + abs_floor) return total;
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const auto& x, const auto& y) { return x.err < y.err; });
    detail::Segment w = *worst;
    if (w.b - w.a < 1e-14 * (std::fabs(w.a) + std::fabs(w.b) + 1.0)) {
      // Segment too narrow to split further; accept what we have if the
      // remaining error is dominated by roundoff, otherwise report failure.
      if (err <= 1e3 * rel_tol * std::fabs(total) + abs_floor) return total;
      throw numeric_error("integrate: stagnated below resolution limit");
    }
    const double mid = 0.5 * (w.a + w.b);
    *worst = detail::gk15(f, w.a, mid);
    segs.push_back(detail::gk15(f, mid, w.b));
  }
  throw numeric_error("integrate: segment budget exhausted");
}

// Smallest w with chi2_cdf(dof, w) >= mass (monotone bisection).  Used to
// trim integration ranges to the region holding all but ~tail of the mass.
inline double chi2_quantile(int dof, double mass) {
  if (mass <= 0.0) return 0.0;
  if (mass >= 1.0) throw domain_error("chi2_quantile: need mass < 1");
  double hi = static_cast<double>(dof);
  while (specfun::chi2_cdf(dof, hi) < mass) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (specfun::chi2_cdf(dof, mid) < mass) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace vorbound::quadrature

#endif
