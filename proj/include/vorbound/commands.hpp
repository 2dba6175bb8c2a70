#ifndef VORBOUND_COMMANDS_HPP
#define VORBOUND_COMMANDS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vorbound/code_bounds.hpp"
#include "vorbound/code_sim.hpp"
#include "vorbound/errors.hpp"
#include "vorbound/lattice_bounds.hpp"
#include "vorbound/lattice_sim.hpp"
#include "vorbound/report.hpp"

namespace vorbound::commands {

using report::fmt;
using report::Table;
using vorbound::Rational;

// Reference-figure defaults: sigma^2 in {0.95, 0.98}/(2 pi e); p in {0.07, 0.1}; k = n/2.
inline std::vector<double> default_sigma2() {
  const double base = 2.0 * std::numbers::pi * std::numbers::e;
  return {0.95 / base, 0.98 / base};
}
inline std::vector<double> default_p() { return {0.07, 0.1}; }

struct RunConfig {
  std::string command;
  std::vector<int> n_values;
  std::vector<double> sigma2;
  std::vector<double> p_values;
  int k = -1;                // explicit dimension (bsc/code commands)
  double k_ratio = 0.5;      // used when k < 0
  std::string lattice = "Z4";
  std::string code_file;     // optional generator file for code-oracle
  long samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::vector<double> radii;  // explicit grid for simulate-lattice
  std::string format = "csv";
  std::string out = "-";

  int k_for(int n) const {
    if (k >= 0) return k;
    double kd = k_ratio * n;
    int ki = static_cast<int>(std::lround(kd));
    if (std::fabs(kd - ki) > 1e-9)
      throw domain_error("k-ratio * n must be an integer (n=" + std::to_string(n) + ")");
    return ki;
  }

  void stamp(Table& t) const {
    t.meta("command", command);
    if (!n_values.empty()) {
      std::string s;
      for (size_t i = 0; i < n_values.size(); ++i) s += (i ? " " : "") + std::to_string(n_values[i]);
      t.meta("n", s);
    }
    if (!sigma2.empty()) {
      std::string s;
      for (size_t i = 0; i < sigma2.size(); ++i) s += (i ? " " : "") + fmt(sigma2[i]);
      t.meta("sigma2", s);
    }
    if (!p_values.empty()) {
      std::string s;
      for (size_t i = 0; i < p_values.size(); ++i) s += (i ? " " : "") + fmt(p_values[i]);
      t.meta("p", s);
    }
    if (k >= 0) t.meta("k", std::to_string(k));
    else t.meta("k_ratio", fmt(k_ratio));
    if (command == "simulate-lattice") t.meta("lattice", lattice);
    if (!code_file.empty()) t.meta("code_file", code_file);
    t.meta("samples", std::to_string(samples));
    t.meta("seed", std::to_string(seed));
    t.meta("workers", std::to_string(workers));
    t.meta("format", format);
  }
};

// ---------------------------------------------------------------------------

inline Table cmd_nsm_table(const RunConfig& cfg) {
  Table t;
  cfg.stamp(t);
  t.columns = {"n",          "nsm_ball",       "nsm_upper", "nsm_zador", "nsm_zador_lattice",
               "nsm_cs_lower", "ratio_upper_ball", "ratio_zador_cs", "notes"};
  for (int n : cfg.n_values) {
    std::vector<std::string> row(t.columns.size());
    std::string notes;
    row[0] = fmt(n);
    row[1] = fmt(lattice_bounds::nsm_ball(n));
    if (n >= 3) {
      double up = lattice_bounds::nsm_upper(n);
      row[2] = fmt(up);
      row[6] = fmt(up / lattice_bounds::nsm_ball(n));
    } else {
      notes += "nsm_upper:divergent;";
    }
    double zador = lattice_bounds::nsm_zador(n);
    row[3] = fmt(zador);
    if (n >= 13) row[4] = fmt(lattice_bounds::nsm_zador_lattice(n));
    else notes += "nsm_zador_lattice:n<13;";
    if (n >= 2) {
      double cs = lattice_bounds::nsm_cs_lower(n);
      row[5] = fmt(cs);
      row[7] = fmt(zador / cs);
    } else {
      notes += "nsm_cs_lower:n<2;";
    }
    row[8] = notes;
    t.add_row(std::move(row));
  }
  return t;
}

inline Table cmd_awgn_pe(const RunConfig& cfg) {
  Table t;
  cfg.stamp(t);
  t.meta("y_axis", "log10");
  t.columns = {"n", "sigma2", "pe_sphere_packing", "pe_new_awgn", "pe_mlb_awgn", "notes"};
  std::vector<double> sig = cfg.sigma2.empty() ? default_sigma2() : cfg.sigma2;
  for (double s2 : sig) {
    for (int n : cfg.n_values) {
      std::vector<std::string> row(t.columns.size());
      row[0] = fmt(n);
      row[1] = fmt(s2);
      lattice_bounds::AwgnParams params(n, s2);
      row[2] = fmt(lattice_bounds::pe_sphere_packing(params));
      std::string notes;
      try {
        row[3] = fmt(lattice_bounds::pe_new_awgn(params).value);
      } catch (const numeric_error& e) {
        notes += std::string("pe_new_awgn:") + e.what() + ";";
      }
      try {
        row[4] = fmt(lattice_bounds::pe_mlb_awgn(params).value);
      } catch (const numeric_error& e) {
        notes += std::string("pe_mlb_awgn:") + e.what() + ";";
      }
      row[5] = notes;
      t.add_row(std::move(row));
    }
  }
  return t;
}

inline Table cmd_bsc_pe(const RunConfig& cfg) {
  Table t;
  cfg.stamp(t);
  t.meta("y_axis", "log10");
  t.columns = {"n", "k", "p", "pe_sp_bsc", "pe_new_bsc", "rcu", "new_le_rcu"};
  std::vector<double> ps = cfg.p_values.empty() ? default_p() : cfg.p_values;
  for (double p : ps) {
    for (int n : cfg.n_values) {
      int k = cfg.k_for(n);
      std::vector<std::string> row(t.columns.size());
      row[0] = fmt(n);
      row[1] = fmt(k);
      row[2] = fmt(p);
      double sp = code_bounds::pe_sp_bsc(n, k, p).value;
      double nb = code_bounds::pe_new_bsc(n, k, p).value;
      double rc = code_bounds::rcu(n, k, p);
      row[3] = fmt(sp);
      row[4] = fmt(nb);
      row[5] = fmt(rc);
      row[6] = nb <= rc ? "1" : "0";
      t.add_row(std::move(row));
    }
  }
  return t;
}

inline Table cmd_simulate_lattice(const RunConfig& cfg) {
  lattice_sim::LatticeSpec spec = lattice_sim::LatticeSpec::parse(cfg.lattice);
  const int n = spec.dim();
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) {
    // Default: 64 points up to a bit past the covering radius.
    auto [rp, rc] = lattice_sim::known_radii(spec);
    for (int i = 1; i <= 64; ++i) radii.push_back(1.1 * rc * i / 64.0);
  }
  lattice_sim::McCdf mc = lattice_sim::estimate_cdf(spec, radii, cfg.samples, cfg.seed, cfg.workers);
  Table t;
  cfg.stamp(t);
  t.meta("dimension", std::to_string(n));
  t.columns = {"r", "cdf", "std_error", "g_ball", "g_jensen"};
  for (size_t i = 0; i < mc.curve.radii.size(); ++i) {
    double r = mc.curve.radii[i];
    t.add_row({fmt(r), fmt(mc.curve.values[i]), fmt(mc.std_error[i]),
               fmt(lattice_bounds::g_ball(n, r)), fmt(lattice_bounds::g_jensen(n, r))});
  }
  return t;
}

inline Table cmd_distortion(const RunConfig& cfg) {
  Table t;
  cfg.stamp(t);
  t.columns = {"n",     "k",        "d_star", "dc_upper", "delta_gap",
               "d_rate", "proof_bound", "notes"};
  for (int n : cfg.n_values) {
    // Unlike bsc-pe, a fractional k-ratio * n is rounded here, with a note.
    int k = cfg.k >= 0 ? cfg.k : static_cast<int>(std::lround(cfg.k_ratio * n));
    if (k < 0 || k > n) throw domain_error("distortion: k out of range for n=" + fmt(n));
    std::string notes;
    if (cfg.k < 0 && std::fabs(cfg.k_ratio * n - k) > 1e-9) notes = "k rounded";
    double rate = static_cast<double>(k) / n;
    std::vector<std::string> row(t.columns.size());
    row[0] = fmt(n);
    row[1] = fmt(k);
    row[2] = fmt(code_bounds::d_star(n, k));
    row[3] = fmt(code_bounds::dc_upper(n, k));
    row[4] = fmt(code_bounds::delta_gap(n, k));
    row[5] = fmt(code_bounds::d_rate(rate));
    row[6] = fmt(code_bounds::delta_gap_proof_bound(n, rate));
    row[7] = notes;
    t.add_row(std::move(row));
  }
  return t;
}

// Exhaustive-oracle report: exact ensemble expectations vs the closed-form
// bounds, margins and PASS/FAIL per inequality.
inline Table cmd_code_oracle(const RunConfig& cfg) {
  Table t;
  cfg.stamp(t);
  t.columns = {"n", "k", "check", "lhs", "rhs", "margin", "status"};
  std::vector<double> ps = cfg.p_values.empty() ? default_p() : cfg.p_values;
  for (int n : cfg.n_values) {
    int k = cfg.k_for(n);
    code_sim::GrassmannianStats gs = code_sim::grassmannian_expectation(n, k, cfg.workers);
    std::string ns = fmt(n), ks = fmt(k);
    t.add_row({ns, ks, "codes_enumerated", gs.code_count.get_str(), "", "", ""});
    // Thm: E[Q_C(r)] >= x_r/(1+x_r) for every r.
    bool q_ok = true;
    Rational worst_margin(1);
    for (int r = 0; r <= n; ++r) {
      Rational x = code_bounds::CodeParams(n, k).x_r_exact(r);
      Rational rhs = x / (Rational(1) + x);
      Rational margin = gs.mean_q(r) - rhs;
      if (margin < worst_margin) worst_margin = margin;
      if (margin < 0) q_ok = false;
    }
    t.add_row({ns, ks, "mean_q_cdf_vs_jensen", "min margin", "0", fmt(worst_margin.get_d()),
               q_ok ? "PASS" : "FAIL"});
    // Distortion bound.
    Rational ed = gs.mean_distortion();
    Rational du = code_bounds::dc_upper_exact(n, k);
    t.add_row({ns, ks, "mean_distortion_vs_upper", fmt(ed.get_d()), fmt(du.get_d()),
               fmt(Rational(du - ed).get_d()), ed <= du ? "PASS" : "FAIL"});
    // Error-probability bound at each requested p (exact rational arithmetic).
    for (double pd : ps) {
      Rational p(static_cast<long>(std::lround(pd * 10000)), 10000);
      p.canonicalize();
      Rational lhs = gs.mean_pe(p);
      Rational rhs = code_bounds::pe_new_bsc_exact(n, k, p);
      t.add_row({ns, ks, "mean_pe_vs_new_bound(p=" + fmt(p.get_d()) + ")", fmt(lhs.get_d()),
                 fmt(rhs.get_d()), fmt(Rational(rhs - lhs).get_d()), lhs <= rhs ? "PASS" : "FAIL"});
    }
  }
  return t;
}

// Exact stats of a single code loaded from a generator file.
inline Table cmd_code_stats(const RunConfig& cfg, const code_sim::BinaryLinearCode& code) {
  code_sim::ExactCodeStats st = code_sim::exact_stats(code);
  Table t;
  cfg.stamp(t);
  t.columns = {"quantity", "value"};
  t.add_row({"n", fmt(st.n)});
  t.add_row({"k", fmt(st.k)});
  t.add_row({"r_pack", fmt(st.r_pack)});
  t.add_row({"r_cov", fmt(st.r_cov)});
  t.add_row({"distortion", fmt(st.distortion.get_d())});
  t.add_row({"distortion_exact", st.distortion.get_str()});
  std::vector<double> ps = cfg.p_values.empty() ? default_p() : cfg.p_values;
  for (double p : ps) t.add_row({"pe(p=" + fmt(p) + ")", fmt(st.pe(p))});
  return t;
}

inline std::string render(const Table& t, const RunConfig& cfg) {
  if (cfg.format == "csv") return report::to_csv(t);
  if (cfg.format == "json") return report::to_json(t);
  if (cfg.format == "svg") {
    // x = first column; y = every numeric bound column after it.
    std::vector<size_t> ycols;
    bool log_y = false;
    for (const auto& [k, v] : t.metadata)
      if (k == "y_axis" && v == "log10") log_y = true;
    for (size_t c = 1; c < t.columns.size(); ++c) {
      const std::string& name = t.columns[c];
      if (name == "notes" || name == "status" || name == "check" || name == "k" ||
          name == "sigma2" || name == "p" || name == "new_le_rcu" || name == "std_error")
        continue;
      ycols.push_back(c);
    }
    return report::to_svg(t, 0, ycols, log_y);
  }
  throw domain_error("render: unknown format '" + cfg.format + "'");
}

}  // namespace vorbound::commands

#endif
