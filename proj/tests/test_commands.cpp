#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "vorbound/commands.hpp"

using Catch::Approx;
using namespace vorbound;
using namespace vorbound::commands;

namespace {

double cell(const report::Table& t, size_t row, const std::string& col) {
  for (size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == col) return std::strtod(t.rows[row][c].c_str(), nullptr);
  FAIL("no column " + col);
  return 0.0;
}

std::string cell_str(const report::Table& t, size_t row, const std::string& col) {
  for (size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == col) return t.rows[row][c];
  FAIL("no column " + col);
  return "";
}

}  // namespace

TEST_CASE("cmd_nsm_table") {
  RunConfig cfg;
  cfg.command = "nsm-table";
  cfg.n_values = {2, 8};
  for (int n = 36; n <= 48; ++n) cfg.n_values.push_back(n);
  auto t = cmd_nsm_table(cfg);
  SECTION("n=2 reports the divergent cell as empty with a reason") {
    CHECK(cell_str(t, 0, "nsm_upper").empty());
    CHECK(cell_str(t, 0, "notes").find("divergent") != std::string::npos);
  }
  SECTION("n=8 ratio obeys the concentration chain") {
    CHECK(cell(t, 1, "ratio_upper_ball") <= 1.5);
    CHECK(cell(t, 1, "ratio_upper_ball") > 1.0);
  }
  SECTION("upper-bound column decreases over 36..48") {
    for (size_t i = 3; i < t.rows.size(); ++i)
      CHECK(cell(t, i, "nsm_upper") < cell(t, i - 1, "nsm_upper"));
  }
}

TEST_CASE("cmd_awgn_pe") {
  RunConfig cfg;
  cfg.command = "awgn-pe";
  cfg.n_values = {8, 16, 24, 32};
  auto t = cmd_awgn_pe(cfg);
  SECTION("defaults are the two reference sigma^2 values") {
    constexpr double kTwoPiE = 2.0 * 3.14159265358979323846 * 2.71828182845904523536;
    CHECK(cell(t, 0, "sigma2") == Approx(0.95 / kTwoPiE).epsilon(1e-10));
    CHECK(cell(t, t.rows.size() - 1, "sigma2") == Approx(0.98 / kTwoPiE).epsilon(1e-10));
  }
  SECTION("sphere packing never exceeds either upper bound") {
    for (size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(cell(t, i, "pe_sphere_packing") <= cell(t, i, "pe_new_awgn") + 1e-12);
      CHECK(cell(t, i, "pe_sphere_packing") <= cell(t, i, "pe_mlb_awgn") + 1e-12);
    }
  }
}

TEST_CASE("cmd_bsc_pe") {
  RunConfig cfg;
  cfg.command = "bsc-pe";
  for (int n = 100; n <= 120; n += 2) cfg.n_values.push_back(n);
  auto t = cmd_bsc_pe(cfg);
  SECTION("defaults are p = 0.07 and p = 0.1 with k = n/2") {
    CHECK(cell(t, 0, "p") == Approx(0.07));
    CHECK(cell(t, 0, "k") == cell(t, 0, "n") / 2);
    CHECK(cell(t, t.rows.size() - 1, "p") == Approx(0.1));
  }
  SECTION("sphere packing below the new bound; dominance flag reported") {
    for (size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(cell(t, i, "pe_sp_bsc") <= cell(t, i, "pe_new_bsc") + 1e-12);
      CHECK((cell_str(t, i, "new_le_rcu") == "1" || cell_str(t, i, "new_le_rcu") == "0"));
    }
  }
  SECTION("k-ratio must divide n") {
    RunConfig bad;
    bad.command = "bsc-pe";
    bad.n_values = {7};
    CHECK_THROWS_AS(cmd_bsc_pe(bad), domain_error);
  }
}

TEST_CASE("cmd_simulate_lattice") {
  RunConfig cfg;
  cfg.command = "simulate-lattice";
  cfg.lattice = "Z4";
  cfg.samples = 50000;
  cfg.seed = 4;
  cfg.radii = {0.25, 0.5, 0.75, 1.0, 1.25};
  auto t = cmd_simulate_lattice(cfg);
  SECTION("curve reaches 1 at the covering radius") {
    CHECK(cell(t, 3, "cdf") == 1.0);
    CHECK(cell(t, 4, "cdf") == 1.0);
  }
  SECTION("overlay columns present and consistent") {
    CHECK(cell(t, 3, "g_ball") == 1.0);
    CHECK(cell(t, 1, "g_jensen") <= cell(t, 1, "g_ball"));
  }
  SECTION("reruns and worker counts give identical bytes") {
    std::string a = render(t, cfg);
    std::string b = render(cmd_simulate_lattice(cfg), cfg);
    CHECK(a == b);
    RunConfig cfg2 = cfg;
    cfg2.workers = 5;
    // worker count is part of the metadata, so compare the data rows only
    auto t2 = cmd_simulate_lattice(cfg2);
    CHECK(t2.rows == t.rows);
  }
}

TEST_CASE("cmd_code_oracle") {
  RunConfig cfg;
  cfg.command = "code-oracle";
  cfg.n_values = {4, 6};
  cfg.k = 2;
  auto t = cmd_code_oracle(cfg);
  SECTION("(4,2) enumerates 35 codes") {
    CHECK(cell_str(t, 0, "lhs") == "35");
  }
  SECTION("every inequality passes") {
    for (size_t i = 0; i < t.rows.size(); ++i) {
      std::string status = cell_str(t, i, "status");
      if (!status.empty()) CHECK(status == "PASS");
    }
  }
  SECTION("capacity violations are loud") {
    RunConfig big;
    big.command = "code-oracle";
    big.n_values = {20};
    big.k = 10;
    CHECK_THROWS_AS(cmd_code_oracle(big), capacity_error);
  }
}

TEST_CASE("cmd_distortion") {
  RunConfig cfg;
  cfg.command = "distortion";
  for (int n = 32; n <= 256; n *= 2) cfg.n_values.push_back(n);
  auto t = cmd_distortion(cfg);
  for (size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(cell(t, i, "d_star") <= cell(t, i, "dc_upper"));
    CHECK(cell(t, i, "delta_gap") <= 6.0);
    CHECK(cell(t, i, "proof_bound") > cell(t, i, "delta_gap"));
    CHECK(cell(t, i, "d_rate") == Approx(0.11002786443835955).margin(1e-6));
  }
  SECTION("fractional k-ratio * n is rounded with a note") {
    RunConfig odd;
    odd.command = "distortion";
    odd.n_values = {33};
    auto t2 = cmd_distortion(odd);
    CHECK(cell(t2, 0, "k") == 17.0);  // lround(16.5)
    CHECK(cell_str(t2, 0, "notes") == "k rounded");
  }
}

TEST_CASE("output formats") {
  report::Table t;
  t.meta("alpha", "1");
  t.columns = {"x", "name", "y"};
  t.add_row({"1", "plain", "0.5"});
  t.add_row({"2", "with,comma", "0.25"});
  t.add_row({"3", "with\"quote", "0.125"});
  SECTION("CSV quoting follows RFC 4180") {
    std::string csv = report::to_csv(t);
    CHECK(csv.find("\"with,comma\"") != std::string::npos);
    CHECK(csv.find("\"with\"\"quote\"") != std::string::npos);
    CHECK(csv.find("# alpha=1\n") != std::string::npos);
    CHECK(csv.find("x,name,y\n") != std::string::npos);
  }
  SECTION("JSON parses back with the same cells") {
    auto j = nlohmann::json::parse(report::to_json(t));
    CHECK(j["columns"].size() == 3);
    CHECK(j["rows"][1][1] == "with,comma");
    CHECK(j["config"]["alpha"] == "1");
  }
  SECTION("SVG is deterministic and timestamp-free") {
    std::string a = report::to_svg(t, 0, {2}, true);
    std::string b = report::to_svg(t, 0, {2}, true);
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("polyline") != std::string::npos);
  }
}

TEST_CASE("number formatting is locale-independent and stable") {
  CHECK(report::fmt(0.25) == "0.25");
  CHECK(report::fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(report::fmt(1e-30) == "1e-30");
  CHECK(report::fmt(12) == "12");
}
