#ifndef VORBOUND_LOGVALUE_HPP
#define VORBOUND_LOGVALUE_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "vorbound/errors.hpp"

namespace vorbound {

// Signed magnitude carried in the natural-log domain.  Quantities like
// (r/r_eff)^n, 2^{k-n} V_{n,r} or n! overflow doubles long before the
// dimensions of interest, so they travel as LogValue and only convert to
// plain double at the edges (with explicit saturation).
struct LogValue {
  double log_mag = -std::numeric_limits<double>::infinity();
  int sign = 0;  // -1, 0, +1

  constexpr LogValue() = default;
  constexpr LogValue(double lm, int s) : log_mag(lm), sign(s) {}

  static LogValue zero() { return LogValue(); }
  static LogValue one() { return LogValue(0.0, +1); }

  // Positive value given as its natural log.
  static LogValue from_log(double l) { return LogValue(l, +1); }

  static LogValue from_double(double x) {
    if (x == 0.0) return zero();
    if (!std::isfinite(x)) throw domain_error("LogValue::from_double: non-finite input");
    return LogValue(std::log(std::fabs(x)), x > 0 ? +1 : -1);
  }

  bool is_zero() const { return sign == 0; }

  // Clamps to +-DBL_MAX when the magnitude exceeds double range.
  double to_double(bool* saturated = nullptr) const {
    if (saturated) *saturated = false;
    if (sign == 0) return 0.0;
    if (log_mag > kMaxLog) {
      if (saturated) *saturated = true;
      return sign * std::numeric_limits<double>::max();
    }
    return sign * std::exp(log_mag);
  }

  LogValue operator*(const LogValue& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return LogValue(log_mag + o.log_mag, sign * o.sign);
  }

  LogValue operator/(const LogValue& o) const {
    if (o.sign == 0) throw domain_error("LogValue: division by zero");
    if (sign == 0) return zero();
    return LogValue(log_mag - o.log_mag, sign * o.sign);
  }

  LogValue operator-() const { return LogValue(log_mag, -sign); }

  LogValue operator+(const LogValue& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    if (sign == o.sign) return LogValue(log_add(log_mag, o.log_mag), sign);
    // Opposite signs: subtract the smaller magnitude from the larger.
    if (log_mag == o.log_mag) return zero();
    if (log_mag > o.log_mag) return LogValue(log_sub(log_mag, o.log_mag), sign);
    return LogValue(log_sub(o.log_mag, log_mag), o.sign);
  }

  LogValue operator-(const LogValue& o) const { return *this + (-o); }

  // |x|^e for nonnegative x; e may be fractional.
  LogValue pow(double e) const {
    if (sign < 0) throw domain_error("LogValue::pow: negative base");
    if (sign == 0) {
      if (e <= 0.0) throw domain_error("LogValue::pow: zero base, nonpositive exponent");
      return zero();
    }
    return LogValue(log_mag * e, +1);
  }

  bool operator<(const LogValue& o) const {
    if (sign != o.sign) return sign < o.sign;
    if (sign == 0) return false;
    if (sign > 0) return log_mag < o.log_mag;
    return log_mag > o.log_mag;
  }
  bool operator>(const LogValue& o) const { return o < *this; }

 private:
  static constexpr double kMaxLog = 709.78;  // log(DBL_MAX) ~ 709.7827

  static double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
  }

  // Requires a > b; log(e^a - e^b).
  static double log_sub(double a, double b) {
    return a + std::log1p(-std::exp(b - a));
  }
};

}  // namespace vorbound

#endif
