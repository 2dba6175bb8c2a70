#include <catch_amalgamated.hpp>

#include <cmath>

#include "vorbound/code_bounds.hpp"

using Catch::Approx;
using namespace vorbound;
using namespace vorbound::code_bounds;

TEST_CASE("r_eff_code") {
  CHECK(r_eff_code(7, 7) == 0);
  CHECK(r_eff_code(7, 0) == 7);
  CHECK(r_eff_code(8, 4) == 2);
  CHECK(r_eff_code(3, 1) == 1);
  CHECK_THROWS_AS(r_eff_code(4, 5), domain_error);
}

TEST_CASE("quasi-ball CDF") {
  CHECK(q_quasi_ball(6, 3, 6).exact == 1);
  CHECK(q_quasi_ball(5, 5, 0).exact == 1);
  auto q = q_quasi_ball(8, 4, 1);
  CHECK(q.exact == Rational(9, 16));
  CHECK(q.value == Approx(9.0 / 16.0).epsilon(1e-15));
  SECTION("valid CDF reaching 1 exactly at r_eff") {
    for (int n : {6, 10, 16}) {
      for (int k : {0, 1, n / 2, n}) {
        int re = r_eff_code(n, k);
        Rational prev(0);
        for (int r = 0; r <= n; ++r) {
          Rational v = q_quasi_ball(n, k, r).exact;
          CHECK(v >= prev);
          if (r < re) CHECK(v < 1);
          else CHECK(v == 1);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("d_star") {
  CHECK(d_star(6, 6) == 0.0);
  CHECK(d_star_exact(8, 4) == Rational(11, 64));
  CHECK(d_star(8, 4) == Approx(0.171875).epsilon(1e-15));
  // r_eff(3,1) = 1; the only term is 1 - 2^{-2} V_{3,0} = 3/4.
  CHECK(d_star_exact(3, 1) == Rational(1, 4));
}

TEST_CASE("dc_upper") {
  CHECK(dc_upper(8, 4) == Approx(0.28839999092713896).epsilon(1e-12));
  SECTION("k = n closed form") {
    int n = 6;
    Rational expect(0);
    for (int r = 0; r < n; ++r) expect += Rational(1, 1) / (1 + Rational(hamming_ball(n, r)));
    expect /= n;
    CHECK(dc_upper_exact(n, n) == expect);
    CHECK(dc_upper_exact(n, n).get_d() <= 0.5);
  }
  SECTION("dominates d_star") {
    for (int n : {4, 9, 16, 33}) {
      for (int k = 0; k <= n; k += 3) CHECK(d_star(n, k) <= dc_upper(n, k));
    }
  }
}

TEST_CASE("delta_gap") {
  SECTION("exact rational identity: dc_upper - d_star = delta_gap / n") {
    for (int n : {3, 8, 15, 20}) {
      for (int k = 0; k <= n; ++k) {
        Rational lhs = dc_upper_exact(n, k) - d_star_exact(n, k);
        Rational rhs = delta_gap_exact(n, k) / n;
        rhs.canonicalize();
        CHECK(lhs == rhs);
      }
    }
  }
  SECTION("k = n reduces to sum of 1/(1+V)") {
    int n = 8;
    Rational expect(0);
    for (int r = 0; r < n; ++r) expect += Rational(1, 1) / (1 + Rational(hamming_ball(n, r)));
    CHECK(delta_gap_exact(n, n) == expect);
  }
  SECTION("constant-gap value at (1024, 512)") {
    double g = delta_gap(1024, 512);
    CHECK(g == Approx(0.48589196536733725).epsilon(1e-9));
    CHECK(g < 6.0);
  }
  SECTION("trend over doubling n stays flat within 0.1") {
    double prev = delta_gap(64, 32);
    for (int n : {128, 256, 512, 1024}) {
      double g = delta_gap(n, n / 2);
      CHECK(g <= prev + 0.1);
      prev = g;
    }
  }
  SECTION("bounded by a measured constant per rate, not growing") {
    // Constants recorded from a dense scan of n in [32, 4096].
    const std::pair<double, double> recorded[] = {{0.25, 1.15}, {0.5, 0.70}, {0.75, 0.56}};
    for (auto [alpha, cap] : recorded) {
      double lo_max = 0.0, hi_max = 0.0;
      for (int n = 32; n <= 4096; n *= 2) {
        int k = static_cast<int>(std::ceil(alpha * n));
        double g = delta_gap(n, k);
        CHECK(g <= cap);
        if (n <= 256) lo_max = std::max(lo_max, g);
        else hi_max = std::max(hi_max, g);
      }
      CHECK(hi_max <= lo_max + 0.1);
    }
  }
  SECTION("log-domain and exact paths agree to 1e-10 relative") {
    for (int n : {16, 32, 48, 64}) {
      for (int k : {1, n / 4, n / 2, n - 1}) {
        double ex = delta_gap_exact(n, k).get_d();
        double lg = delta_gap_log(n, k);
        CHECK(lg == Approx(ex).epsilon(1e-10));
        double exu = dc_upper_exact(n, k).get_d();
        double lgu = dc_upper_log(n, k);
        CHECK(lgu == Approx(exu).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("delta_gap proof-form bound") {
  double pb = delta_gap_proof_bound(1024, 0.5);
  // m = ceil(512 (h2inv(1/2) + 1/2)), kappa = (m+1)/1024.
  double m = std::ceil(512.0 * (0.11002786443835955 + 0.5));
  double kappa = (m + 1.0) / 1024.0;
  CHECK(pb == Approx(2.0 * (1.0 - kappa) / (1.0 - 2.0 * kappa) + 1.0).epsilon(1e-12));
  CHECK(pb > delta_gap(1024, 512));
  CHECK(std::isinf(delta_gap_proof_bound(8, 1e-6)));
}

TEST_CASE("pe_sp_bsc") {
  SECTION("k = n: quasi-ball is the origin") {
    for (double p : {0.05, 0.2, 0.45}) {
      CHECK(pe_sp_bsc(6, 6, p).value == Approx(1.0 - std::pow(1.0 - p, 6)).epsilon(1e-12));
    }
  }
  SECTION("k = 0: quasi-ball is everything") {
    CHECK(pe_sp_bsc(6, 0, 0.3).value == Approx(0.0).margin(1e-15));
  }
  SECTION("(3,1): 3p^2 - 2p^3") {
    for (double p : {0.05, 0.1, 0.3, 0.49}) {
      CHECK(pe_sp_bsc(3, 1, p).value == Approx(3 * p * p - 2 * p * p * p).epsilon(1e-12));
    }
    Rational pr(1, 10);
    CHECK(pe_sp_bsc_exact(3, 1, pr) == Rational(7, 250));
  }
  CHECK_THROWS_AS(pe_sp_bsc(6, 3, 0.0), domain_error);
  CHECK_THROWS_AS(pe_sp_bsc(6, 3, 0.5), domain_error);
}

TEST_CASE("pe_new_bsc") {
  SECTION("dominates sphere packing") {
    for (int n : {8, 33, 100}) {
      for (double p : {0.07, 0.1, 0.3}) {
        CHECK(pe_new_bsc(n, n / 2, p).value >= pe_sp_bsc(n, n / 2, p).value);
      }
    }
  }
  SECTION("numeric dominance over RCU near capacity") {
    CHECK(pe_new_bsc(200, 100, 0.1).value <= rcu(200, 100, 0.1));
  }
}

TEST_CASE("rcu") {
  SECTION("k = n saturates at 1") {
    CHECK(rcu(5, 5, 0.2) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("p -> 0 limit is 2^{k-n}") {
    CHECK(rcu(6, 3, 1e-7) == Approx(1.0 / 8.0).epsilon(1e-4));
  }
  SECTION("(3,1,0.1) four-term sum") {
    CHECK(rcu(3, 1, 0.1) == Approx(0.45325).epsilon(1e-12));
    CHECK(rcu_exact(3, 1, Rational(1, 10)) == Rational(1813, 4000));
  }
  SECTION("nondecreasing in p") {
    double prev = 0.0;
    for (double p = 0.01; p < 0.5; p += 0.01) {
      double v = rcu(10, 5, p);
      CHECK(v >= prev - 1e-14);
      prev = v;
    }
  }
}

TEST_CASE("exact and log-domain BSC paths agree to 1e-10") {
  for (int n : {8, 16, 33, 64}) {
    int k = n / 2;
    for (auto [num, den] : {std::pair<long, long>{7, 100}, {1, 10}, {1, 4}, {2, 5}}) {
      Rational p(num, den);
      double pd = static_cast<double>(num) / den;
      CHECK(pe_sp_bsc(n, k, pd).value == Approx(pe_sp_bsc_exact(n, k, p).get_d()).epsilon(1e-10));
      CHECK(pe_new_bsc(n, k, pd).value ==
            Approx(pe_new_bsc_exact(n, k, p).get_d()).epsilon(1e-10));
      CHECK(rcu(n, k, pd) == Approx(rcu_exact(n, k, p).get_d()).epsilon(1e-10));
    }
  }
}

TEST_CASE("d_rate and the finite-n bracket") {
  CHECK(d_rate(1.0) == 0.0);
  CHECK(d_rate(0.0) == Approx(0.5).margin(1e-12));
  CHECK(d_rate(0.5) == Approx(0.11002786443835955).margin(1e-9));
  SECTION("bracket holds and brackets the reference asymptotically") {
    auto [lo, hi] = d_n_bracket(1024, 0.5);
    CHECK(lo == Approx(d_star(1024, 512)).epsilon(1e-15));
    CHECK(hi == Approx(dc_upper(1024, 512)).epsilon(1e-15));
    CHECK(lo <= hi);
    CHECK(std::fabs(lo - d_rate(0.5)) < 0.01);
  }
  CHECK_THROWS_AS(d_n_bracket(10, 0.26), domain_error);
}

TEST_CASE("CodeParams") {
  CodeParams cp(8, 4);
  CHECK(cp.x_r_exact(2) == Rational(37, 16));
  CHECK_THROWS_AS(CodeParams(4, 5), domain_error);
}
