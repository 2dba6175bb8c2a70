#ifndef VORBOUND_CODE_SIM_HPP
#define VORBOUND_CODE_SIM_HPP

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "vorbound/bigcount.hpp"
#include "vorbound/errors.hpp"
#include "vorbound/rng.hpp"

namespace vorbound::code_sim {

// Words of F_2^n are packed into uint32_t with coordinate 1 in the most
// significant used bit (bit n-1), so increasing integer order is exactly
// lexicographic order of the 0/1 strings.
inline constexpr int kMaxN = 30;
inline constexpr int kMaxCosetBits = 26;          // syndrome-table regime
inline constexpr long kMaxSubspaces = 10'000'000; // enumeration cap

struct BinaryLinearCode {
  int n = 0;
  int k = 0;
  std::vector<std::uint32_t> rows;  // k generator rows
  bool canonical = false;
};

inline std::string word_to_string(std::uint32_t w, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((w >> (n - 1 - i)) & 1u) s[static_cast<size_t>(i)] = '1';
  return s;
}

inline std::uint32_t word_from_string(const std::string& s) {
  if (s.empty() || s.size() > kMaxN) throw domain_error("word_from_string: bad length");
  std::uint32_t w = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw domain_error("word_from_string: not a 0/1 string");
    w = (w << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return w;
}

// Reduced row echelon form over F_2; unique representative per subspace.
inline BinaryLinearCode canonicalize(int n, std::vector<std::uint32_t> rows) {
  if (n < 1 || n > kMaxN) throw domain_error("canonicalize: need 1 <= n <= 30");
  const size_t k_in = rows.size();
  size_t rank = 0;
  for (int bit = n - 1; bit >= 0 && rank < rows.size(); --bit) {
    size_t piv = rank;
    while (piv < rows.size() && !((rows[piv] >> bit) & 1u)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != rank && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[rank];
    ++rank;
  }
  if (rank != k_in) throw domain_error("canonicalize: generator rows are linearly dependent");
  BinaryLinearCode out;
  out.n = n;
  out.k = static_cast<int>(rank);
  out.rows = std::move(rows);
  out.canonical = true;
  return out;
}

// ---------------------------------------------------------------------------
// Voronoi (coset-leader) machinery
// ---------------------------------------------------------------------------

struct VoronoiCell {
  std::vector<std::uint32_t> leaders;        // one per coset, indexed by coset id
  std::vector<std::uint64_t> weight_histogram;  // leader counts per Hamming weight
};

namespace detail {

struct RrefView {
  std::vector<std::uint32_t> rows;
  std::vector<int> pivot_bits;     // per row
  std::vector<int> nonpivot_bits;  // ascending bit index
};

inline RrefView rref_view(const BinaryLinearCode& code) {
  BinaryLinearCode c = code.canonical ? code : canonicalize(code.n, code.rows);
  RrefView v;
  v.rows = c.rows;
  std::uint32_t pivots = 0;
  for (std::uint32_t row : v.rows) {
    int b = 31 - std::countl_zero(row);
    v.pivot_bits.push_back(b);
    pivots |= (1u << b);
  }
  for (int b = 0; b < c.n; ++b)
    if (!((pivots >> b) & 1u)) v.nonpivot_bits.push_back(b);
  return v;
}

// Reduce x modulo the code; the result has zeros at all pivot bits, giving a
// canonical coset representative.
inline std::uint32_t reduce(const RrefView& v, std::uint32_t x) {
  for (size_t i = 0; i < v.rows.size(); ++i)
    if ((x >> v.pivot_bits[i]) & 1u) x ^= v.rows[i];
  return x;
}

inline std::uint32_t coset_index(const RrefView& v, std::uint32_t rep) {
  std::uint32_t idx = 0;
  for (size_t j = 0; j < v.nonpivot_bits.size(); ++j)
    idx |= ((rep >> v.nonpivot_bits[j]) & 1u) << j;
  return idx;
}

inline std::uint32_t rep_from_index(const RrefView& v, std::uint32_t idx) {
  std::uint32_t rep = 0;
  for (size_t j = 0; j < v.nonpivot_bits.size(); ++j)
    rep |= ((idx >> j) & 1u) << v.nonpivot_bits[j];
  return rep;
}

// Next word of the same weight in increasing integer order (Gosper).
inline std::uint32_t next_same_weight(std::uint32_t x) {
  std::uint32_t c = x & (~x + 1u);
  std::uint32_t r = x + c;
  return (((x ^ r) >> 2) / c) | r;
}

// Visit words of F_2^n in (weight, lex) order until `visit` returns false.
template <class Visit>
inline void scan_weight_lex(int n, Visit&& visit) {
  if (!visit(0u)) return;
  for (int w = 1; w <= n; ++w) {
    std::uint32_t x = (1u << w) - 1u;
    const std::uint32_t last = ((1u << w) - 1u) << (n - w);
    for (;;) {
      if (!visit(x)) return;
      if (x == last) break;
      x = next_same_weight(x);
    }
  }
}

// Leader weight histogram; `leaders_out` may be null.  `force_sweep` routes
// through the representative-sweep branch regardless of size (test hook).
inline std::vector<std::uint64_t> leader_histogram(const RrefView& v, int n, int k,
                                                   std::vector<std::uint32_t>* leaders_out,
                                                   bool force_sweep = false) {
  std::vector<std::uint64_t> hist(static_cast<size_t>(n) + 1, 0);
  const int coset_bits = n - k;
  const std::uint64_t total = 1ull << coset_bits;
  if (coset_bits <= kMaxCosetBits && !force_sweep) {
    std::vector<std::uint64_t> seen((total + 63) / 64, 0);
    if (leaders_out) leaders_out->assign(total, 0);
    std::uint64_t filled = 0;
    scan_weight_lex(n, [&](std::uint32_t x) {
      std::uint32_t idx = coset_index(v, reduce(v, x));
      std::uint64_t bit = 1ull << (idx & 63u);
      if (!(seen[idx >> 6] & bit)) {
        seen[idx >> 6] |= bit;
        hist[static_cast<size_t>(std::popcount(x))] += 1;
        if (leaders_out) (*leaders_out)[idx] = x;
        ++filled;
      }
      return filled < total;
    });
    return hist;
  }
  // Few codewords: sweep canonical representatives, minimum weight over the code.
  if (leaders_out)
    throw capacity_error("voronoi_cell: leader list infeasible for n-k > 26");
  std::vector<std::uint32_t> codewords(1ull << k);
  for (std::uint64_t m = 0; m < codewords.size(); ++m) {
    std::uint32_t c = 0;
    for (int i = 0; i < k; ++i)
      if ((m >> i) & 1ull) c ^= v.rows[static_cast<size_t>(i)];
    codewords[m] = c;
  }
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint32_t rep = rep_from_index(v, static_cast<std::uint32_t>(idx));
    int best = 32;
    for (std::uint32_t c : codewords) best = std::min(best, std::popcount(rep ^ c));
    hist[static_cast<size_t>(best)] += 1;
  }
  return hist;
}

}  // namespace detail

// Coset leaders: per coset the minimum-weight word, ties to the
// lexicographically smallest.
inline VoronoiCell voronoi_cell(const BinaryLinearCode& code) {
  if (code.n < 1 || code.n > kMaxN) throw capacity_error("voronoi_cell: need n <= 30");
  if (code.n - code.k > kMaxCosetBits)
    throw capacity_error("voronoi_cell: 2^{n-k} leader table exceeds capacity");
  auto v = detail::rref_view(code);
  VoronoiCell cell;
  cell.weight_histogram = detail::leader_histogram(v, code.n, code.k, &cell.leaders);
  return cell;
}

// ---------------------------------------------------------------------------
// Exact per-code statistics
// ---------------------------------------------------------------------------

struct ExactCodeStats {
  int n = 0;
  int k = 0;
  std::vector<BigCount> leader_hist;  // weights 0..n
  std::vector<Rational> q_cdf;        // Q_C(0..n)
  Rational distortion;                // D_C
  int r_pack = 0;
  int r_cov = 0;

  // P_e(C, p) = 1 - sum_w hist_w p^w (1-p)^{n-w}, exact in p.
  Rational pe(const Rational& p) const {
    Rational q = Rational(1) - p;
    Rational mu(0);
    Rational pw(1);
    // p^w (1-p)^{n-w} built incrementally.
    std::vector<Rational> qpow(static_cast<size_t>(n) + 1);
    qpow[0] = 1;
    for (int i = 1; i <= n; ++i) qpow[static_cast<size_t>(i)] = qpow[static_cast<size_t>(i - 1)] * q;
    for (int w = 0; w <= n; ++w) {
      if (leader_hist[static_cast<size_t>(w)] != 0)
        mu += Rational(leader_hist[static_cast<size_t>(w)]) * pw * qpow[static_cast<size_t>(n - w)];
      pw *= p;
    }
    Rational out = Rational(1) - mu;
    out.canonicalize();
    return out;
  }

  double pe(double p) const {
    double q = 1.0 - p;
    double mu = 0.0;
    for (int w = n; w >= 0; --w)
      if (leader_hist[static_cast<size_t>(w)] != 0)
        mu += leader_hist[static_cast<size_t>(w)].get_d() * std::pow(p, w) * std::pow(q, n - w);
    return 1.0 - mu;
  }
};

namespace detail {

inline ExactCodeStats stats_from_hist(int n, int k, const std::vector<std::uint64_t>& hist) {
  ExactCodeStats st;
  st.n = n;
  st.k = k;
  st.leader_hist.assign(static_cast<size_t>(n) + 1, BigCount(0));
  for (int w = 0; w <= n; ++w) st.leader_hist[static_cast<size_t>(w)] = BigCount(hist[static_cast<size_t>(w)]);
  BigCount cell = pow2(n - k);
  auto v = hamming_ball_table(n);
  st.q_cdf.resize(static_cast<size_t>(n) + 1);
  BigCount prefix = 0;
  BigCount wsum = 0;
  st.r_pack = 0;
  st.r_cov = 0;
  for (int r = 0; r <= n; ++r) {
    prefix += st.leader_hist[static_cast<size_t>(r)];
    wsum += st.leader_hist[static_cast<size_t>(r)] * r;
    Rational q(prefix, cell);
    q.canonicalize();
    st.q_cdf[static_cast<size_t>(r)] = q;
    if (prefix == v[static_cast<size_t>(r)]) st.r_pack = r;
    if (st.leader_hist[static_cast<size_t>(r)] != 0) st.r_cov = r;
  }
  st.distortion = Rational(wsum, cell * n);
  st.distortion.canonicalize();
  return st;
}

}  // namespace detail

inline ExactCodeStats exact_stats(const BinaryLinearCode& code) {
  if (code.n < 1 || code.n > kMaxN) throw capacity_error("exact_stats: need n <= 30");
  auto v = detail::rref_view(code);
  auto hist = detail::leader_histogram(v, code.n, code.k, nullptr);
  return detail::stats_from_hist(code.n, code.k, hist);
}

// ---------------------------------------------------------------------------
// Grassmannian enumeration and sampling
// ---------------------------------------------------------------------------

// Visit every k-dimensional subspace of F_2^n exactly once, as canonical RREF
// generator matrices.  Throws capacity_error when the subspace count exceeds
// the enumeration cap.
template <class F>
inline void enumerate_grassmannian(int n, int k, F&& f) {
  if (n < 1 || n > kMaxN || k < 0 || k > n)
    throw domain_error("enumerate_grassmannian: need 0 <= k <= n <= 30");
  BigCount count = gaussian_binomial(n, k);
  if (count > kMaxSubspaces)
    throw capacity_error("enumerate_grassmannian: subspace count exceeds cap");
  if (k == 0) {
    BinaryLinearCode code;
    code.n = n;
    code.k = 0;
    code.canonical = true;
    f(code);
    return;
  }
  // Pivot columns as bit indices, MSB first (coordinate order).
  std::vector<int> piv(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) piv[static_cast<size_t>(i)] = n - 1 - i;  // first combination
  auto next_combination = [&]() -> bool {
    // Descending bit lists; advance like a combination counter.
    int i = k - 1;
    while (i >= 0 && piv[static_cast<size_t>(i)] == (k - 1 - i)) --i;
    if (i < 0) return false;
    piv[static_cast<size_t>(i)] -= 1;
    for (int j = i + 1; j < k; ++j) piv[static_cast<size_t>(j)] = piv[static_cast<size_t>(i)] - (j - i);
    return true;
  };
  BinaryLinearCode code;
  code.n = n;
  code.k = k;
  code.canonical = true;
  do {
    std::uint32_t pivmask = 0;
    for (int b : piv) pivmask |= (1u << b);
    // Free positions per row: bits below the pivot that are not pivots.
    std::vector<std::vector<int>> free_bits(static_cast<size_t>(k));
    int total_free = 0;
    for (int i = 0; i < k; ++i) {
      for (int b = piv[static_cast<size_t>(i)] - 1; b >= 0; --b)
        if (!((pivmask >> b) & 1u)) free_bits[static_cast<size_t>(i)].push_back(b);
      total_free += static_cast<int>(free_bits[static_cast<size_t>(i)].size());
    }
    const std::uint64_t assignments = 1ull << total_free;
    for (std::uint64_t m = 0; m < assignments; ++m) {
      code.rows.assign(static_cast<size_t>(k), 0u);
      std::uint64_t bits = m;
      for (int i = 0; i < k; ++i) {
        std::uint32_t row = 1u << piv[static_cast<size_t>(i)];
        for (int b : free_bits[static_cast<size_t>(i)]) {
          row |= static_cast<std::uint32_t>(bits & 1ull) << b;
          bits >>= 1;
        }
        code.rows[static_cast<size_t>(i)] = row;
      }
      f(code);
    }
  } while (next_combination());
}

// Uniform sample from Gr_{n,k}(F_2): uniform k x n generator bits, rejected
// until full rank (every subspace has equally many full-rank generators).
inline BinaryLinearCode sample_code(int n, int k, rng::Stream& stream) {
  if (n < 1 || n > kMaxN || k < 0 || k > n)
    throw domain_error("sample_code: need 0 <= k <= n <= 30");
  if (k == 0) {
    BinaryLinearCode code;
    code.n = n;
    code.k = 0;
    code.canonical = true;
    return code;
  }
  const std::uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (;;) {
    std::vector<std::uint32_t> rows(static_cast<size_t>(k));
    for (auto& r : rows) r = static_cast<std::uint32_t>(stream.next_u64()) & mask;
    // Rank check on a scratch copy.
    std::vector<std::uint32_t> scratch = rows;
    int rank = 0;
    for (int bit = n - 1; bit >= 0 && rank < k; --bit) {
      int piv = -1;
      for (int i = rank; i < k; ++i)
        if ((scratch[static_cast<size_t>(i)] >> bit) & 1u) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(scratch[static_cast<size_t>(rank)], scratch[static_cast<size_t>(piv)]);
      for (int i = 0; i < k; ++i)
        if (i != rank && ((scratch[static_cast<size_t>(i)] >> bit) & 1u))
          scratch[static_cast<size_t>(i)] ^= scratch[static_cast<size_t>(rank)];
      ++rank;
    }
    if (rank == k) return canonicalize(n, rows);
  }
}

// ---------------------------------------------------------------------------
// Exact ensemble expectations
// ---------------------------------------------------------------------------

struct GrassmannianStats {
  int n = 0;
  int k = 0;
  BigCount code_count;
  std::vector<BigCount> hist_sum;  // summed leader histograms over all codes

  Rational mean_q(int r) const {
    BigCount prefix = 0;
    for (int w = 0; w <= r; ++w) prefix += hist_sum[static_cast<size_t>(w)];
    Rational out(prefix, code_count * pow2(n - k));
    out.canonicalize();
    return out;
  }
  Rational mean_distortion() const {
    BigCount wsum = 0;
    for (int w = 0; w <= n; ++w) wsum += hist_sum[static_cast<size_t>(w)] * w;
    Rational out(wsum, code_count * pow2(n - k) * n);
    out.canonicalize();
    return out;
  }
  // E[mu_p(V_C)] = sum_w avg_hist_w p^w (1-p)^{n-w}.
  Rational mean_mu_vor(const Rational& p) const {
    Rational q = Rational(1) - p;
    std::vector<Rational> qpow(static_cast<size_t>(n) + 1);
    qpow[0] = 1;
    for (int i = 1; i <= n; ++i) qpow[static_cast<size_t>(i)] = qpow[static_cast<size_t>(i - 1)] * q;
    Rational acc(0);
    Rational pw(1);
    for (int w = 0; w <= n; ++w) {
      if (hist_sum[static_cast<size_t>(w)] != 0)
        acc += Rational(hist_sum[static_cast<size_t>(w)]) * pw * qpow[static_cast<size_t>(n - w)];
      pw *= p;
    }
    acc /= Rational(code_count);
    acc.canonicalize();
    return acc;
  }
  Rational mean_pe(const Rational& p) const {
    Rational out = Rational(1) - mean_mu_vor(p);
    out.canonicalize();
    return out;
  }
};

// Exact average of the leader histogram over all of Gr_{n,k}(F_2); every
// ensemble expectation (Q_C, D_C, Pe, mu_p) derives from it exactly.
// Integer accumulation makes the result independent of the worker count.
inline GrassmannianStats grassmannian_expectation(int n, int k, int workers = 0) {
  GrassmannianStats gs;
  gs.n = n;
  gs.k = k;
  gs.code_count = gaussian_binomial(n, k);
  if (gs.code_count > kMaxSubspaces)
    throw capacity_error("grassmannian_expectation: subspace count exceeds cap");
  int nw = workers > 0 ? workers
                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  // Re-running the cheap enumeration per worker costs k ops per code; the
  // histogram is the expensive part.  Worker w handles code indices
  // congruent to w, and the integer merge is exact, so the result does not
  // depend on the worker count.
  std::vector<std::vector<std::uint64_t>> local(
      static_cast<size_t>(nw), std::vector<std::uint64_t>(static_cast<size_t>(n) + 1, 0));
  auto body = [&](int w) {
    auto& h = local[static_cast<size_t>(w)];
    std::uint64_t idx = 0;
    enumerate_grassmannian(n, k, [&](const BinaryLinearCode& code) {
      if (static_cast<int>(idx++ % static_cast<std::uint64_t>(nw)) != w) return;
      auto v = detail::rref_view(code);
      auto hist = detail::leader_histogram(v, n, k, nullptr);
      for (int t = 0; t <= n; ++t) h[static_cast<size_t>(t)] += hist[static_cast<size_t>(t)];
    });
  };
  if (nw <= 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  gs.hist_sum.assign(static_cast<size_t>(n) + 1, BigCount(0));
  for (const auto& h : local)
    for (int w = 0; w <= n; ++w) gs.hist_sum[static_cast<size_t>(w)] += BigCount(h[static_cast<size_t>(w)]);
  return gs;
}

// ---------------------------------------------------------------------------
// Subset measures (shared by the identity suites)
// ---------------------------------------------------------------------------

// Weight histogram of an explicit word set.
inline std::vector<BigCount> subset_weight_histogram(const std::vector<std::uint32_t>& words,
                                                     int n) {
  std::vector<BigCount> hist(static_cast<size_t>(n) + 1, BigCount(0));
  for (std::uint32_t w : words) hist[static_cast<size_t>(std::popcount(w))] += 1;
  return hist;
}

// mu_p(K) = sum_w hist_w p^w (1-p)^{n-w}, exact.
inline Rational mu_p_exact(const std::vector<BigCount>& hist, int n, const Rational& p) {
  Rational q = Rational(1) - p;
  std::vector<Rational> qpow(static_cast<size_t>(n) + 1);
  qpow[0] = 1;
  for (int i = 1; i <= n; ++i) qpow[static_cast<size_t>(i)] = qpow[static_cast<size_t>(i - 1)] * q;
  Rational acc(0);
  Rational pw(1);
  for (int w = 0; w <= n; ++w) {
    if (hist[static_cast<size_t>(w)] != 0)
      acc += Rational(hist[static_cast<size_t>(w)]) * pw * qpow[static_cast<size_t>(n - w)];
    pw *= p;
  }
  acc.canonicalize();
  return acc;
}

// The same measure through the discrete spherical-CDF expectation:
// mu_p(K) = |K| ( p/(1-p) p^n + (1-2p)/(1-p) E[Q_K(|Z|)/C(n,|Z|)] ),
// |Z| ~ Binomial(n,p); with Q_K(r) = prefix(r)/|K| the |K| cancels into
// sum_r p^r (1-p)^{n-r} prefix(r).
inline Rational mu_p_via_cdf(const std::vector<BigCount>& hist, int n, const Rational& p) {
  BigCount size = 0;
  for (const auto& h : hist) size += h;
  Rational q = Rational(1) - p;
  std::vector<Rational> qpow(static_cast<size_t>(n) + 1);
  qpow[0] = 1;
  for (int i = 1; i <= n; ++i) qpow[static_cast<size_t>(i)] = qpow[static_cast<size_t>(i - 1)] * q;
  BigCount prefix = 0;
  Rational acc(0);
  Rational pw(1);
  for (int r = 0; r <= n; ++r) {
    prefix += hist[static_cast<size_t>(r)];
    if (prefix != 0) acc += Rational(prefix) * pw * qpow[static_cast<size_t>(n - r)];
    pw *= p;
  }
  Rational pn = pw / p;  // loop left pw = p^{n+1}
  Rational out = Rational(size) * p / q * pn + (Rational(1) - 2 * p) / q * acc;
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Generator-file I/O: one 0/1 row per line, '#' comments, bit-exact round trip
// ---------------------------------------------------------------------------

inline BinaryLinearCode read_code(std::istream& in) {
  std::vector<std::uint32_t> rows;
  int n = -1;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t lo = line.find_first_not_of(" \t\r");
    if (lo == std::string::npos) continue;
    size_t hi = line.find_last_not_of(" \t\r");
    std::string row = line.substr(lo, hi - lo + 1);
    if (n < 0) n = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != n)
      throw domain_error("read_code: inconsistent row lengths");
    rows.push_back(word_from_string(row));
  }
  if (n < 1) throw domain_error("read_code: no generator rows");
  BinaryLinearCode code;
  code.n = n;
  code.k = static_cast<int>(rows.size());
  code.rows = std::move(rows);
  code.canonical = false;
  return code;
}

inline void write_code(std::ostream& out, const BinaryLinearCode& code) {
  for (std::uint32_t row : code.rows) out << word_to_string(row, code.n) << '\n';
}

}  // namespace vorbound::code_sim

#endif
