#ifndef VORBOUND_REPORT_HPP
#define VORBOUND_REPORT_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vorbound/errors.hpp"
#include "vorbound/version.hpp"

namespace vorbound::report {

// Locale-independent shortest-round-trip formatting; identical bytes on rerun.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline std::string fmt(long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered key/value
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }
  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string csv_escape(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace detail

// CSV with '#'-prefixed metadata lines before the RFC-4180 body.
inline std::string to_csv(const Table& t) {
  std::string out;
  out += "# tool=";
  out += kVersion;
  out += "\n";
  for (const auto& [k, v] : t.metadata) out += "# " + k + "=" + v + "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ",";
    out += detail::csv_escape(t.columns[i]);
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += detail::csv_escape(row[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::string to_json(const Table& t) {
  nlohmann::json j;
  j["tool"] = kVersion;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["config"] = meta;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) rows.push_back(row);
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

// Minimal self-contained SVG line chart.  x = values of column `x_col`,
// one polyline per column in `y_cols`; log-y when requested (nonpositive
// values are skipped).  Deterministic: no timestamps, fixed formatting.
inline std::string to_svg(const Table& t, size_t x_col, const std::vector<size_t>& y_cols,
                          bool log_y) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double W = 800, H = 560, ml = 70, mr = 160, mt = 30, mb = 50;
  auto parse = [](const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end != s.c_str() && std::isfinite(out);
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : t.rows) {
    double x, y;
    if (!parse(row[x_col], x)) continue;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (size_t c : y_cols) {
      if (!parse(row[c], y)) continue;
      if (log_y && y <= 0.0) continue;
      double yv = log_y ? std::log10(y) : y;
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto sy = [&](double yv) { return H - mb - (yv - ymin) / (ymax - ymin) * (H - mt - mb); };
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) +
         "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(W - ml - mr) +
         "\" height=\"" + fmt(H - mt - mb) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  // Axis endpoint labels.
  svg += "<text x=\"" + fmt(ml) + "\" y=\"" + fmt(H - mb + 20) + "\" font-size=\"12\">" +
         fmt(xmin) + "</text>\n";
  svg += "<text x=\"" + fmt(W - mr - 30) + "\" y=\"" + fmt(H - mb + 20) + "\" font-size=\"12\">" +
         fmt(xmax) + "</text>\n";
  std::string ylab_lo = log_y ? ("1e" + fmt(ymin)) : fmt(ymin);
  std::string ylab_hi = log_y ? ("1e" + fmt(ymax)) : fmt(ymax);
  svg += "<text x=\"5\" y=\"" + fmt(H - mb) + "\" font-size=\"12\">" + ylab_lo + "</text>\n";
  svg += "<text x=\"5\" y=\"" + fmt(mt + 10) + "\" font-size=\"12\">" + ylab_hi + "</text>\n";
  for (size_t ci = 0; ci < y_cols.size(); ++ci) {
    const size_t c = y_cols[ci];
    const char* color = kColors[ci % 8];
    std::string pts;
    for (const auto& row : t.rows) {
      double x, y;
      if (!parse(row[x_col], x) || !parse(row[c], y)) continue;
      if (log_y && y <= 0.0) continue;
      double yv = log_y ? std::log10(y) : y;
      pts += fmt(sx(x)) + "," + fmt(sy(yv)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + fmt(W - mr + 8) + "\" y=\"" + fmt(mt + 16 + 18 * ci) +
           "\" font-size=\"12\" fill=\"";
    svg += color;
    svg += "\">" + t.columns[c] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace vorbound::report

#endif
