// Batch CLI: evaluates the bound families over parameter grids, runs the
// Monte Carlo simulators and exact oracles, and writes CSV/JSON/SVG.
//
// Exit codes: 0 success, 2 validation error, 3 capacity error, 4 numeric error.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vorbound/commands.hpp"
#include "vorbound/version.hpp"

namespace {

using vorbound::commands::RunConfig;
using vorbound::commands::Table;

std::vector<int> expand_n(const std::vector<int>& ns, const std::string& range) {
  std::vector<int> out = ns;
  if (!range.empty()) {
    size_t colon = range.find(':');
    if (colon == std::string::npos)
      throw vorbound::domain_error("--n-range expects LO:HI[:STEP]");
    int lo = std::stoi(range.substr(0, colon));
    std::string rest = range.substr(colon + 1);
    size_t colon2 = rest.find(':');
    int hi = std::stoi(colon2 == std::string::npos ? rest : rest.substr(0, colon2));
    int step = colon2 == std::string::npos ? 1 : std::stoi(rest.substr(colon2 + 1));
    if (step < 1 || hi < lo) throw vorbound::domain_error("--n-range expects LO<=HI, STEP>=1");
    for (int n = lo; n <= hi; n += step) out.push_back(n);
  }
  return out;
}

void emit(const Table& t, const RunConfig& cfg) {
  std::string text = vorbound::commands::render(t, cfg);
  if (cfg.out == "-" || cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw vorbound::domain_error("cannot open output file '" + cfg.out + "'");
  f << text;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& n_range) {
  sub->add_option("--n", cfg.n_values, "dimension/blocklength values");
  sub->add_option("--n-range", n_range, "dimension range LO:HI[:STEP]");
  sub->add_option("--seed", cfg.seed, "RNG seed");
  sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  sub->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
  sub->add_option("--format", cfg.format, "output format: csv, json, svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--out", cfg.out, "output path ('-' = stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(vorbound::kVersion) +
               " - lattice and binary-code quantization/error bounds"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string n_range;

  auto* nsm = app.add_subcommand("nsm-table", "NSM bound table over a dimension range");
  add_common(nsm, cfg, n_range);

  auto* awgn = app.add_subcommand("awgn-pe", "AWGN error-probability bounds");
  add_common(awgn, cfg, n_range);
  awgn->add_option("--sigma2", cfg.sigma2, "noise variances (default: reference figure values)");

  auto* bsc = app.add_subcommand("bsc-pe", "BSC error-probability bounds");
  add_common(bsc, cfg, n_range);
  bsc->add_option("--p", cfg.p_values, "crossover probabilities (default: 0.07 0.1)");
  bsc->add_option("--k", cfg.k, "code dimension (fixed)");
  bsc->add_option("--k-ratio", cfg.k_ratio, "code rate k/n (default 0.5)");

  auto* sim = app.add_subcommand("simulate-lattice", "Monte Carlo Voronoi spherical CDF");
  add_common(sim, cfg, n_range);
  sim->add_option("--lattice", cfg.lattice, "lattice spec, e.g. Z4, D4, E8, E8x5, Z16+D4");
  sim->add_option("--radii", cfg.radii, "explicit radius grid (ascending)");

  auto* oracle = app.add_subcommand("code-oracle", "exact Grassmannian oracle report");
  add_common(oracle, cfg, n_range);
  oracle->add_option("--p", cfg.p_values, "crossover probabilities");
  oracle->add_option("--k", cfg.k, "code dimension (fixed)");
  oracle->add_option("--k-ratio", cfg.k_ratio, "code rate k/n");
  oracle->add_option("--code", cfg.code_file, "generator file: report exact stats of this code");

  auto* dist = app.add_subcommand("distortion", "distortion bounds and rate-distortion reference");
  add_common(dist, cfg, n_range);
  dist->add_option("--k", cfg.k, "code dimension (fixed)");
  dist->add_option("--k-ratio", cfg.k_ratio, "code rate k/n (default 0.5)");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.n_values = expand_n(cfg.n_values, n_range);
    if (cfg.n_values.empty() && !sim->parsed() && cfg.code_file.empty())
      throw vorbound::domain_error("need --n or --n-range");
    Table t;
    if (nsm->parsed()) {
      cfg.command = "nsm-table";
      t = vorbound::commands::cmd_nsm_table(cfg);
    } else if (awgn->parsed()) {
      cfg.command = "awgn-pe";
      t = vorbound::commands::cmd_awgn_pe(cfg);
    } else if (bsc->parsed()) {
      cfg.command = "bsc-pe";
      t = vorbound::commands::cmd_bsc_pe(cfg);
    } else if (sim->parsed()) {
      cfg.command = "simulate-lattice";
      t = vorbound::commands::cmd_simulate_lattice(cfg);
    } else if (oracle->parsed()) {
      cfg.command = "code-oracle";
      if (!cfg.code_file.empty()) {
        std::ifstream f(cfg.code_file);
        if (!f) throw vorbound::domain_error("cannot open code file '" + cfg.code_file + "'");
        auto code = vorbound::code_sim::read_code(f);
        t = vorbound::commands::cmd_code_stats(cfg, code);
      } else {
        t = vorbound::commands::cmd_code_oracle(cfg);
      }
    } else if (dist->parsed()) {
      cfg.command = "distortion";
      t = vorbound::commands::cmd_distortion(cfg);
    }
    emit(t, cfg);
  } catch (const vorbound::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const vorbound::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
