#ifndef VORBOUND_LATTICE_SIM_HPP
#define VORBOUND_LATTICE_SIM_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "vorbound/errors.hpp"
#include "vorbound/lattice_bounds.hpp"
#include "vorbound/rng.hpp"
#include "vorbound/specfun.hpp"

namespace vorbound::lattice_sim {

using lattice_bounds::CdfCurve;

// ---------------------------------------------------------------------------
// Lattice families
// ---------------------------------------------------------------------------

// A concrete lattice: Z^n, D_n, E_8, or a direct sum of those, together with
// the global scale that makes the covolume 1.
struct LatticeSpec {
  enum class Family { Zn, Dn, E8, DirectSum };

  Family family = Family::Zn;
  int part_dim = 0;                // for leaf families
  std::vector<LatticeSpec> parts;  // for DirectSum

  static LatticeSpec make_zn(int n) {
    if (n < 1) throw domain_error("LatticeSpec: Z^n needs n >= 1");
    LatticeSpec s;
    s.family = Family::Zn;
    s.part_dim = n;
    return s;
  }
  static LatticeSpec make_dn(int n) {
    if (n < 2) throw domain_error("LatticeSpec: D_n needs n >= 2");
    LatticeSpec s;
    s.family = Family::Dn;
    s.part_dim = n;
    return s;
  }
  static LatticeSpec make_e8() {
    LatticeSpec s;
    s.family = Family::E8;
    s.part_dim = 8;
    return s;
  }
  static LatticeSpec direct_sum(std::vector<LatticeSpec> parts) {
    if (parts.empty()) throw domain_error("LatticeSpec: empty direct sum");
    if (parts.size() == 1) return parts.front();
    LatticeSpec s;
    s.family = Family::DirectSum;
    s.parts = std::move(parts);
    for (const auto& p : s.parts) {
      if (p.family == Family::DirectSum) throw domain_error("LatticeSpec: nested direct sum");
      s.part_dim += p.part_dim;
    }
    return s;
  }

  int dim() const { return part_dim; }

  // ln covol of the unscaled (natural-coordinates) lattice.
  double log_raw_covolume() const {
    switch (family) {
      case Family::Zn:
      case Family::E8:
        return 0.0;
      case Family::Dn:
        return specfun::kLn2;
      case Family::DirectSum: {
        double s = 0.0;
        for (const auto& p : parts) s += p.log_raw_covolume();
        return s;
      }
    }
    return 0.0;
  }

  // Global scale giving unit covolume.
  double scale() const { return std::exp(-log_raw_covolume() / dim()); }

  std::string name() const {
    switch (family) {
      case Family::Zn:
        return "Z" + std::to_string(part_dim);
      case Family::Dn:
        return "D" + std::to_string(part_dim);
      case Family::E8:
        return "E8";
      case Family::DirectSum: {
        std::string out;
        for (size_t i = 0; i < parts.size(); ++i) {
          if (i) out += "+";
          out += parts[i].name();
        }
        return out;
      }
    }
    return "?";
  }

  // Grammar: term(('x'|'^')count)? joined by '+'; terms are Z<n>, D<n>, E8.
  // Examples: "Z4", "D4", "E8", "E8x5", "Z16+D4".
  static LatticeSpec parse(const std::string& text);
};

namespace detail {

inline LatticeSpec parse_term(const std::string& t) {
  auto fail = [&]() -> LatticeSpec {
    throw domain_error("LatticeSpec: cannot parse term '" + t + "'");
  };
  size_t mult_pos = t.find_first_of("x^");
  std::string base = t.substr(0, mult_pos);
  long mult = 1;
  if (mult_pos != std::string::npos) {
    try {
      mult = std::stol(t.substr(mult_pos + 1));
    } catch (...) {
      return fail();
    }
    if (mult < 1) return fail();
  }
  LatticeSpec leaf;
  if (base == "E8") {
    leaf = LatticeSpec::make_e8();
  } else if (base.size() > 1 && (base[0] == 'Z' || base[0] == 'D')) {
    long n = 0;
    try {
      n = std::stol(base.substr(1));
    } catch (...) {
      return fail();
    }
    leaf = base[0] == 'Z' ? LatticeSpec::make_zn(static_cast<int>(n))
                          : LatticeSpec::make_dn(static_cast<int>(n));
  } else {
    return fail();
  }
  if (mult == 1) return leaf;
  std::vector<LatticeSpec> copies(static_cast<size_t>(mult), leaf);
  return LatticeSpec::direct_sum(std::move(copies));
}

}  // namespace detail

inline LatticeSpec LatticeSpec::parse(const std::string& text) {
  std::vector<LatticeSpec> terms;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t next = text.find('+', pos);
    std::string term = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (term.empty()) throw domain_error("LatticeSpec: empty term in '" + text + "'");
    LatticeSpec t = detail::parse_term(term);
    if (t.family == Family::DirectSum) {
      for (auto& p : t.parts) terms.push_back(p);
    } else {
      terms.push_back(t);
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return direct_sum(std::move(terms));
}

// ---------------------------------------------------------------------------
// Exact decoders (natural, unscaled coordinates)
// ---------------------------------------------------------------------------

namespace detail {

// Round half toward the smaller integer, so coordinate ties resolve to the
// lexicographically smaller lattice vector.
inline double round_half_down(double x) { return std::ceil(x - 0.5); }

inline void decode_zn(std::span<const double> x, std::span<double> out) {
  for (size_t i = 0; i < x.size(); ++i) out[i] = round_half_down(x[i]);
}

// Conway-Sloane D_n decoder: round all coordinates; if the sum is odd, re-round
// the coordinate with the largest rounding error the other way.
inline void decode_dn(std::span<const double> x, std::span<double> out) {
  long sum = 0;
  size_t worst = 0;
  double worst_err = -1.0;
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = round_half_down(x[i]);
    sum += static_cast<long>(out[i]);
    double err = std::fabs(x[i] - out[i]);
    if (err > worst_err) {
      worst_err = err;
      worst = i;
    }
  }
  if (sum % 2 != 0) {
    double xi = x[worst];
    double fi = out[worst];
    out[worst] = xi > fi ? fi + 1.0 : fi - 1.0;
  }
}

inline double dist2(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

inline bool lex_less(std::span<const double> a, std::span<const double> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// E8 = D8 union (D8 + (1/2,...,1/2)): decode in both cosets, keep the closer.
inline void decode_e8(std::span<const double> x, std::span<double> out) {
  double y1[8], y2[8], shifted[8];
  decode_dn(x, std::span<double>(y1, 8));
  for (int i = 0; i < 8; ++i) shifted[i] = x[i] - 0.5;
  decode_dn(std::span<const double>(shifted, 8), std::span<double>(y2, 8));
  for (int i = 0; i < 8; ++i) y2[i] += 0.5;
  double d1 = dist2(x, std::span<const double>(y1, 8));
  double d2 = dist2(x, std::span<const double>(y2, 8));
  const double* pick = y1;
  if (d2 < d1 || (d2 == d1 && lex_less(std::span<const double>(y2, 8), std::span<const double>(y1, 8))))
    pick = y2;
  for (int i = 0; i < 8; ++i) out[i] = pick[i];
}

inline void decode_raw(const LatticeSpec& spec, std::span<const double> x, std::span<double> out) {
  switch (spec.family) {
    case LatticeSpec::Family::Zn:
      decode_zn(x, out);
      return;
    case LatticeSpec::Family::Dn:
      decode_dn(x, out);
      return;
    case LatticeSpec::Family::E8:
      decode_e8(x, out);
      return;
    case LatticeSpec::Family::DirectSum: {
      size_t off = 0;
      for (const auto& p : spec.parts) {
        size_t d = static_cast<size_t>(p.dim());
        decode_raw(p, x.subspan(off, d), out.subspan(off, d));
        off += d;
      }
      return;
    }
  }
}

// x = B u for the generator basis of each leaf family, u in [0,1)^n.
// Z^n: identity.  D_n: rows e_i - e_{i+1} (i < n) and e_{n-1} + e_n.
// E8: (2,0,...,0), rows -e_{i-1} + e_i (i = 2..7), and (1/2,...,1/2).
inline void fundamental_point(const LatticeSpec& spec, std::span<const double> u,
                              std::span<double> x) {
  switch (spec.family) {
    case LatticeSpec::Family::Zn:
      for (size_t i = 0; i < u.size(); ++i) x[i] = u[i];
      return;
    case LatticeSpec::Family::Dn: {
      size_t n = u.size();
      for (size_t i = 0; i < n; ++i) x[i] = 0.0;
      for (size_t i = 0; i + 1 < n; ++i) {
        x[i] += u[i];
        x[i + 1] -= u[i];
      }
      x[n - 2] += u[n - 1];
      x[n - 1] += u[n - 1];
      return;
    }
    case LatticeSpec::Family::E8: {
      for (int i = 0; i < 8; ++i) x[i] = 0.5 * u[7];
      x[0] += 2.0 * u[0];
      for (int i = 1; i < 7; ++i) {
        x[i - 1] -= u[i];
        x[i] += u[i];
      }
      return;
    }
    case LatticeSpec::Family::DirectSum: {
      size_t off = 0;
      for (const auto& p : spec.parts) {
        size_t d = static_cast<size_t>(p.dim());
        fundamental_point(p, u.subspan(off, d), x.subspan(off, d));
        off += d;
      }
      return;
    }
  }
}

}  // namespace detail

// Nearest lattice point in the unit-covolume (scaled) lattice.
inline std::vector<double> nearest_point(const LatticeSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim())
    throw domain_error("nearest_point: dimension mismatch");
  const double s = spec.scale();
  std::vector<double> raw(x.size()), out(x.size());
  for (size_t i = 0; i < x.size(); ++i) raw[i] = x[i] / s;
  detail::decode_raw(spec, raw, out);
  for (auto& v : out) v *= s;
  return out;
}

// One draw of U_L ~ Uniform(Voronoi cell) of the unit-covolume lattice:
// project a uniform point of a fundamental cell through the decoder.
inline std::vector<double> sample_voronoi(const LatticeSpec& spec, rng::Stream& stream) {
  const int n = spec.dim();
  std::vector<double> u(n), x(n), q(n);
  for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = stream.next_unit_co();
  detail::fundamental_point(spec, u, x);
  detail::decode_raw(spec, x, q);
  const double s = spec.scale();
  std::vector<double> e(n);
  for (int i = 0; i < n; ++i) e[static_cast<size_t>(i)] = s * (x[static_cast<size_t>(i)] - q[static_cast<size_t>(i)]);
  return e;
}

// Closed-form packing/covering radii of the unit-covolume lattice.
inline std::pair<double, double> known_radii(const LatticeSpec& spec) {
  const double s = spec.scale();
  switch (spec.family) {
    case LatticeSpec::Family::Zn:
      return {0.5 * s, 0.5 * std::sqrt(static_cast<double>(spec.dim())) * s};
    case LatticeSpec::Family::Dn: {
      double rp = std::sqrt(2.0) / 2.0;
      double rc = std::max(1.0, 0.5 * std::sqrt(static_cast<double>(spec.dim())));
      return {rp * s, rc * s};
    }
    case LatticeSpec::Family::E8:
      return {std::sqrt(0.5) * s, 1.0 * s};
    case LatticeSpec::Family::DirectSum: {
      double rp = std::numeric_limits<double>::infinity();
      double rc2 = 0.0;
      for (const auto& p : spec.parts) {
        // Parts are unscaled here; the common scale applies once at the end.
        double prp, prc;
        switch (p.family) {
          case LatticeSpec::Family::Zn:
            prp = 0.5;
            prc = 0.5 * std::sqrt(static_cast<double>(p.dim()));
            break;
          case LatticeSpec::Family::Dn:
            prp = std::sqrt(2.0) / 2.0;
            prc = std::max(1.0, 0.5 * std::sqrt(static_cast<double>(p.dim())));
            break;
          case LatticeSpec::Family::E8:
            prp = std::sqrt(0.5);
            prc = 1.0;
            break;
          default:
            throw domain_error("known_radii: unsupported nested family");
        }
        rp = std::min(rp, prp);
        rc2 += prc * prc;
      }
      return {rp * s, std::sqrt(rc2) * s};
    }
  }
  throw domain_error("known_radii: unsupported family");
}

// ---------------------------------------------------------------------------
// Monte Carlo estimators
// ---------------------------------------------------------------------------

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

struct McCdf {
  CdfCurve curve;
  std::vector<double> std_error;
  long samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Samples are processed in fixed-size blocks and block results merged in
// block order, so every floating-point reduction has the same shape for any
// worker count; results are bit-identical regardless of threading.
inline constexpr long kBlock = 16384;

template <class Accum, class PerSample>
inline std::vector<Accum> run_blocked(long samples, int workers, PerSample&& per_sample) {
  if (samples < 1) throw domain_error("monte carlo: need samples >= 1");
  const long nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<Accum> acc(static_cast<size_t>(nblocks));
  int nw = workers > 0 ? workers
                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nw = static_cast<int>(std::min<long>(nw, nblocks));
  std::atomic<long> next_block{0};
  auto body = [&]() {
    for (;;) {
      long b = next_block.fetch_add(1);
      if (b >= nblocks) return;
      long lo = b * kBlock;
      long hi = std::min(samples, lo + kBlock);
      Accum& a = acc[static_cast<size_t>(b)];
      for (long i = lo; i < hi; ++i) per_sample(static_cast<std::uint64_t>(i), a);
    }
  };
  if (nw <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  return acc;
}

struct MomentAccum {
  double sum = 0.0;
  double sumsq = 0.0;
  long count = 0;
};

}  // namespace detail

// Mean of ||e||^2 / n over the Voronoi cell.
inline McEstimate estimate_nsm(const LatticeSpec& spec, long samples, std::uint64_t seed,
                               int workers = 0) {
  const int n = spec.dim();
  auto acc = detail::run_blocked<detail::MomentAccum>(
      samples, workers, [&](std::uint64_t idx, detail::MomentAccum& a) {
        rng::Stream st(seed, idx);
        std::vector<double> e = sample_voronoi(spec, st);
        double v = 0.0;
        for (double c : e) v += c * c;
        v /= n;
        a.sum += v;
        a.sumsq += v * v;
        a.count += 1;
      });
  double sum = 0.0, sumsq = 0.0;
  long count = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sumsq += a.sumsq;
    count += a.count;
  }
  McEstimate out;
  out.samples = count;
  out.seed = seed;
  out.mean = sum / count;
  double var = count > 1 ? std::max(0.0, (sumsq - sum * sum / count) / (count - 1)) : 0.0;
  out.std_error = std::sqrt(var / count);
  return out;
}

// Fraction of Gaussian draws decoded away from the origin.
inline McEstimate estimate_pe(const LatticeSpec& spec, double sigma2, long samples,
                              std::uint64_t seed, int workers = 0) {
  if (!(sigma2 > 0.0)) throw domain_error("estimate_pe: need sigma2 > 0");
  const int n = spec.dim();
  const double sigma = std::sqrt(sigma2);
  struct Accum {
    long errors = 0;
    long count = 0;
  };
  auto acc = detail::run_blocked<Accum>(samples, workers, [&](std::uint64_t idx, Accum& a) {
    rng::Stream st(seed, idx);
    std::vector<double> z(static_cast<size_t>(n));
    for (int i = 0; i < n; i += 2) {
      double g1, g2;
      st.next_gaussian_pair(g1, g2);
      z[static_cast<size_t>(i)] = sigma * g1;
      if (i + 1 < n) z[static_cast<size_t>(i + 1)] = sigma * g2;
    }
    std::vector<double> q = nearest_point(spec, z);
    bool err = false;
    for (double c : q) {
      if (c != 0.0) {
        err = true;
        break;
      }
    }
    a.errors += err ? 1 : 0;
    a.count += 1;
  });
  long errors = 0, count = 0;
  for (const auto& a : acc) {
    errors += a.errors;
    count += a.count;
  }
  McEstimate out;
  out.samples = count;
  out.seed = seed;
  out.mean = static_cast<double>(errors) / count;
  out.std_error = std::sqrt(out.mean * (1.0 - out.mean) / count);
  return out;
}

// Empirical Voronoi spherical CDF over an ascending radius grid, with
// binomial standard errors.
inline McCdf estimate_cdf(const LatticeSpec& spec, std::vector<double> radii, long samples,
                          std::uint64_t seed, int workers = 0) {
  if (radii.empty()) throw domain_error("estimate_cdf: empty radius grid");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw domain_error("estimate_cdf: radii must be ascending");
  struct Accum {
    std::vector<long> first_bin;  // index of first grid radius >= ||e||
    long beyond = 0;
    long count = 0;
  };
  const size_t g = radii.size();
  auto acc = detail::run_blocked<Accum>(samples, workers, [&](std::uint64_t idx, Accum& a) {
    if (a.first_bin.empty()) a.first_bin.assign(g, 0);
    rng::Stream st(seed, idx);
    std::vector<double> e = sample_voronoi(spec, st);
    double norm2 = 0.0;
    for (double c : e) norm2 += c * c;
    double norm = std::sqrt(norm2);
    auto it = std::lower_bound(radii.begin(), radii.end(), norm);
    if (it == radii.end()) a.beyond += 1;
    else a.first_bin[static_cast<size_t>(it - radii.begin())] += 1;
    a.count += 1;
  });
  std::vector<long> first(g, 0);
  long count = 0;
  for (const auto& a : acc) {
    if (!a.first_bin.empty())
      for (size_t i = 0; i < g; ++i) first[i] += a.first_bin[i];
    count += a.count;
  }
  McCdf out;
  out.samples = count;
  out.seed = seed;
  out.curve.n = spec.dim();
  out.curve.label = spec.name();
  out.curve.radii = std::move(radii);
  out.curve.values.resize(g);
  out.std_error.resize(g);
  long cum = 0;
  for (size_t i = 0; i < g; ++i) {
    cum += first[i];
    double p = static_cast<double>(cum) / count;
    out.curve.values[i] = p;
    out.std_error[i] = std::sqrt(p * (1.0 - p) / count);
  }
  return out;
}

}  // namespace vorbound::lattice_sim

#endif
