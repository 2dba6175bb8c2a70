#include <catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "vorbound/code_bounds.hpp"
#include "vorbound/code_sim.hpp"

using Catch::Approx;
using namespace vorbound;
using namespace vorbound::code_sim;

namespace {

std::vector<std::uint32_t> all_codewords(const BinaryLinearCode& code) {
  std::vector<std::uint32_t> out(1ull << code.k);
  for (std::uint64_t m = 0; m < out.size(); ++m) {
    std::uint32_t c = 0;
    for (int i = 0; i < code.k; ++i)
      if ((m >> i) & 1ull) c ^= code.rows[static_cast<size_t>(i)];
    out[m] = c;
  }
  return out;
}

}  // namespace

TEST_CASE("canonicalize") {
  SECTION("two rows reduce to RREF") {
    auto code = canonicalize(3, {word_from_string("110"), word_from_string("011")});
    REQUIRE(code.k == 2);
    CHECK(word_to_string(code.rows[0], 3) == "101");
    CHECK(word_to_string(code.rows[1], 3) == "011");
  }
  SECTION("already reduced row is untouched") {
    auto code = canonicalize(3, {word_from_string("111")});
    CHECK(word_to_string(code.rows[0], 3) == "111");
  }
  SECTION("dependent rows fail") {
    CHECK_THROWS_AS(canonicalize(3, {word_from_string("111"), word_from_string("111")}),
                    domain_error);
  }
  SECTION("idempotent and representative-invariant") {
    auto a = canonicalize(4, {word_from_string("1100"), word_from_string("0110")});
    auto b = canonicalize(4, {word_from_string("1010"), word_from_string("0110")});
    CHECK(a.rows == b.rows);  // same subspace, same RREF
    auto again = canonicalize(4, a.rows);
    CHECK(again.rows == a.rows);
  }
}

TEST_CASE("voronoi_cell") {
  SECTION("repetition code n=3 k=1") {
    auto cell = voronoi_cell(canonicalize(3, {word_from_string("111")}));
    std::set<std::uint32_t> leaders(cell.leaders.begin(), cell.leaders.end());
    std::set<std::uint32_t> expect = {0b000, 0b001, 0b010, 0b100};
    CHECK(leaders == expect);
    CHECK(cell.weight_histogram[0] == 1);
    CHECK(cell.weight_histogram[1] == 3);
  }
  SECTION("k = n leaves only the origin") {
    auto cell = voronoi_cell(canonicalize(2, {word_from_string("10"), word_from_string("01")}));
    REQUIRE(cell.leaders.size() == 1);
    CHECK(cell.leaders[0] == 0);
  }
  SECTION("parity code n=3 k=2: lexicographic tie-break picks 001") {
    auto cell = voronoi_cell(canonicalize(3, {word_from_string("110"), word_from_string("011")}));
    std::set<std::uint32_t> leaders(cell.leaders.begin(), cell.leaders.end());
    std::set<std::uint32_t> expect = {0b000, 0b001};
    CHECK(leaders == expect);
  }
  SECTION("partition: code + leaders tile F_2^n") {
    rng::Stream st(40, 0);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 4 + static_cast<int>(st.next_u64() % 7);  // 4..10
      int k = static_cast<int>(st.next_u64() % (n + 1));
      auto code = sample_code(n, k, st);
      auto cell = voronoi_cell(code);
      auto cws = all_codewords(code);
      std::set<std::uint32_t> all;
      for (std::uint32_t c : cws)
        for (std::uint32_t u : cell.leaders) all.insert(c ^ u);
      CHECK(all.size() == (1ull << n));
    }
  }
}

TEST_CASE("exact_stats") {
  SECTION("repetition code n=3 k=1") {
    auto st = exact_stats(canonicalize(3, {word_from_string("111")}));
    CHECK(st.distortion == Rational(1, 4));
    CHECK(st.r_pack == 1);
    CHECK(st.r_cov == 1);
    CHECK(st.pe(Rational(1, 10)) == Rational(7, 250));  // 3p^2 - 2p^3 at p=1/10
    CHECK(st.pe(0.1) == Approx(0.028).epsilon(1e-12));
  }
  SECTION("full code k = n") {
    auto st = exact_stats(canonicalize(3, {word_from_string("100"), word_from_string("010"),
                                           word_from_string("001")}));
    CHECK(st.distortion == 0);
    CHECK(st.r_cov == 0);
    for (double p : {0.1, 0.3})
      CHECK(st.pe(p) == Approx(1.0 - std::pow(1.0 - p, 3)).epsilon(1e-12));
  }
  SECTION("parity code n=3 k=2") {
    auto st = exact_stats(canonicalize(3, {word_from_string("110"), word_from_string("011")}));
    CHECK(st.distortion == Rational(1, 6));
  }
  SECTION("spherical CDF is a valid CDF hitting 1 at r_cov") {
    rng::Stream rnd(41, 0);
    for (int trial = 0; trial < 10; ++trial) {
      auto code = sample_code(9, 4, rnd);
      auto st = exact_stats(code);
      Rational prev(0);
      for (int r = 0; r <= 9; ++r) {
        CHECK(st.q_cdf[static_cast<size_t>(r)] >= prev);
        prev = st.q_cdf[static_cast<size_t>(r)];
      }
      CHECK(st.q_cdf[static_cast<size_t>(st.r_cov)] == 1);
      if (st.r_cov > 0) CHECK(st.q_cdf[static_cast<size_t>(st.r_cov - 1)] < 1);
    }
  }
  SECTION("every code's distortion dominates the quasi-ball value") {
    rng::Stream rnd(46, 0);
    for (int trial = 0; trial < 40; ++trial) {
      int n = 4 + static_cast<int>(rnd.next_u64() % 17);  // 4..20
      int k = static_cast<int>(rnd.next_u64() % (n + 1));
      auto st = exact_stats(sample_code(n, k, rnd));
      CHECK(st.distortion >= code_bounds::d_star_exact(n, k));
    }
    // k = 1 at n = 20: the gap is strictly positive for typical codes.
    Rational acc(0);
    const int reps = 50;
    for (int i = 0; i < reps; ++i) acc += exact_stats(sample_code(20, 1, rnd)).distortion;
    acc /= reps;
    CHECK(acc > code_bounds::d_star_exact(20, 1));
  }
  SECTION("distortion identity n D = sum (1 - Q(r))") {
    rng::Stream rnd(42, 0);
    for (int trial = 0; trial < 10; ++trial) {
      int n = 5 + static_cast<int>(rnd.next_u64() % 5);
      int k = static_cast<int>(rnd.next_u64() % (n + 1));
      auto st = exact_stats(sample_code(n, k, rnd));
      Rational sum(0);
      for (int r = 0; r < n; ++r) sum += Rational(1) - st.q_cdf[static_cast<size_t>(r)];
      Rational lhs = st.distortion * n;
      lhs.canonicalize();
      sum.canonicalize();
      CHECK(lhs == sum);
    }
  }
  SECTION("r_pack equals floor((dmin-1)/2) from codeword enumeration") {
    rng::Stream rnd(43, 0);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 6 + static_cast<int>(rnd.next_u64() % 5);
      int k = 1 + static_cast<int>(rnd.next_u64() % (n - 1));
      auto code = sample_code(n, k, rnd);
      auto st = exact_stats(code);
      int dmin = n + 1;
      for (std::uint32_t c : all_codewords(code))
        if (c != 0) dmin = std::min(dmin, std::popcount(c));
      CHECK(st.r_pack == (dmin - 1) / 2);
    }
  }
  SECTION("r_cov equals the max leader weight and the exhaustive covering radius") {
    rng::Stream rnd(44, 0);
    for (int trial = 0; trial < 10; ++trial) {
      int n = 5 + static_cast<int>(rnd.next_u64() % 4);
      int k = 1 + static_cast<int>(rnd.next_u64() % n);
      auto code = sample_code(n, k, rnd);
      auto st = exact_stats(code);
      auto cws = all_codewords(code);
      int rcov = 0;
      for (std::uint32_t x = 0; x < (1u << n); ++x) {
        int best = n + 1;
        for (std::uint32_t c : cws) best = std::min(best, std::popcount(x ^ c));
        rcov = std::max(rcov, best);
      }
      CHECK(st.r_cov == rcov);
    }
  }
  SECTION("syndrome-table and sweep paths agree") {
    rng::Stream rnd(45, 0);
    for (int trial = 0; trial < 10; ++trial) {
      auto code = sample_code(10, 3, rnd);
      auto v = detail::rref_view(code);
      auto h1 = detail::leader_histogram(v, 10, 3, nullptr, false);
      auto h2 = detail::leader_histogram(v, 10, 3, nullptr, true);
      CHECK(h1 == h2);
    }
  }
}

TEST_CASE("enumerate_grassmannian") {
  SECTION("(4,2) yields the 35 distinct subspaces") {
    std::set<std::vector<std::uint32_t>> seen;
    enumerate_grassmannian(4, 2, [&](const BinaryLinearCode& code) {
      REQUIRE(code.k == 2);
      auto canon = canonicalize(4, code.rows);
      CHECK(canon.rows == code.rows);
      seen.insert(code.rows);
    });
    CHECK(seen.size() == 35);
  }
  SECTION("k = 0 and k = n are singletons") {
    int count = 0;
    enumerate_grassmannian(5, 0, [&](const BinaryLinearCode&) { ++count; });
    CHECK(count == 1);
    count = 0;
    enumerate_grassmannian(5, 5, [&](const BinaryLinearCode&) { ++count; });
    CHECK(count == 1);
  }
  SECTION("counts match the Gaussian binomial") {
    for (int n : {5, 7, 9}) {
      for (int k = 0; k <= 3; ++k) {
        long count = 0;
        enumerate_grassmannian(n, k, [&](const BinaryLinearCode&) { ++count; });
        CHECK(BigCount(count) == gaussian_binomial(n, k));
      }
    }
  }
  SECTION("capacity cap") {
    CHECK_THROWS_AS(enumerate_grassmannian(20, 10, [](const BinaryLinearCode&) {}),
                    capacity_error);
  }
}

TEST_CASE("sample_code") {
  SECTION("k = 0 always returns the zero code") {
    rng::Stream st(50, 0);
    auto code = sample_code(6, 0, st);
    CHECK(code.k == 0);
    CHECK(code.rows.empty());
  }
  SECTION("full-rank acceptance probability keeps expected retries below 4") {
    // prod_{j>=1} (1 - 2^{-j}) > 0.288, so rejection sampling needs < 4
    // attempts on average for any k <= n.
    double prod = 1.0;
    for (int j = 1; j <= 64; ++j) prod *= 1.0 - std::pow(2.0, -j);
    CHECK(prod > 0.288);
    CHECK(1.0 / prod < 4.0);
  }
  SECTION("uniform over Gr(4,2) by chi-squared test") {
    std::map<std::vector<std::uint32_t>, long> freq;
    rng::Stream st(51, 0);
    const long N = 100000;
    for (long i = 0; i < N; ++i) freq[sample_code(4, 2, st).rows] += 1;
    REQUIRE(freq.size() == 35);
    double expect = N / 35.0;
    double chi2 = 0.0;
    for (const auto& [rows, count] : freq) {
      double d = count - expect;
      chi2 += d * d / expect;
    }
    CHECK(chi2 < 72.0);  // chi^2_{34} 0.9999 quantile is ~72.5
  }
}

TEST_CASE("grassmannian_expectation") {
  SECTION("E[Q_C(n)] = 1") {
    auto gs = grassmannian_expectation(6, 2);
    CHECK(gs.mean_q(6) == 1);
  }
  SECTION("(6,2): Jensen bound on the expected CDF holds exactly") {
    auto gs = grassmannian_expectation(6, 2);
    for (int r = 0; r <= 6; ++r) {
      Rational x = code_bounds::CodeParams(6, 2).x_r_exact(r);
      Rational bound = x / (Rational(1) + x);
      CHECK(gs.mean_q(r) >= bound);
    }
  }
  SECTION("(6,2): expected distortion below the closed-form bound, exactly") {
    auto gs = grassmannian_expectation(6, 2);
    CHECK(gs.mean_distortion() <= code_bounds::dc_upper_exact(6, 2));
  }
  SECTION("worker count does not change the exact result") {
    auto a = grassmannian_expectation(6, 3, 1);
    auto b = grassmannian_expectation(6, 3, 4);
    CHECK(a.hist_sum == b.hist_sum);
  }
}

TEST_CASE("subset measures: the two mu_p routes agree exactly") {
  rng::Stream st(60, 0);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 6;
    std::uint64_t size = 1 + st.next_u64() % (1ull << n);
    std::set<std::uint32_t> words;
    while (words.size() < size) words.insert(static_cast<std::uint32_t>(st.next_u64() & 63));
    std::vector<std::uint32_t> list(words.begin(), words.end());
    auto hist = subset_weight_histogram(list, n);
    for (long j = 1; j <= 20; ++j) {
      Rational p(j, 41);
      CHECK(mu_p_exact(hist, n, p) == mu_p_via_cdf(hist, n, p));
    }
  }
}

TEST_CASE("generator file round trip") {
  auto code = canonicalize(5, {word_from_string("11010"), word_from_string("00111")});
  std::stringstream ss;
  write_code(ss, code);
  CHECK(ss.str() == "11010\n00111\n");
  std::stringstream in("# a comment\n11010\n  00111  # trailing comment\n\n");
  auto back = read_code(in);
  CHECK(back.n == 5);
  CHECK(back.rows == code.rows);
  SECTION("random codes round trip bit-exactly") {
    rng::Stream st(61, 0);
    for (int trial = 0; trial < 20; ++trial) {
      auto c = sample_code(8, 3, st);
      std::stringstream buf;
      write_code(buf, c);
      auto r = read_code(buf);
      CHECK(r.rows == c.rows);
      CHECK(r.n == c.n);
    }
  }
}
