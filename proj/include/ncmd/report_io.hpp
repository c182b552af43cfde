/*
 * Copyright 2026 The ncmd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NCMD_REPORT_IO_HPP
#define NCMD_REPORT_IO_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ncmd/diagnostics.hpp"
#include "ncmd/format.hpp"

namespace ncmd {

inline constexpr const char* kCsvHeader =
    "family,regime,scaling,n,x,log_p_exact,log_p_mc,stderr_log,s_n,normalized_rate,rate_target,residual";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace detail

/// One header line, then one line per row of each report in the given order.
inline void write_csv(std::ostream& os, const std::vector<const ConvergenceReport*>& reports) {
  os << kCsvHeader << '\n';
  for (const auto* r : reports) {
    for (const auto& row : r->rows) {
      os << detail::csv_field(r->family) << ',' << to_string(r->regime) << ',' << detail::csv_field(r->scaling) << ','
         << row.n << ',' << format_double(row.x) << ',' << format_double(row.log_p_exact) << ','
         << detail::csv_opt(row.log_p_mc) << ',' << detail::csv_opt(row.stderr_log) << ',' << format_double(row.s_n)
         << ',' << format_double(row.normalized_rate) << ',' << format_double(row.rate_target) << ','
         << format_double(row.residual) << '\n';
    }
  }
}

inline void write_csv(std::ostream& os, const ConvergenceReport& r) { write_csv(os, std::vector{&r}); }

using Json = nlohmann::ordered_json;

namespace detail {

inline Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline double number_from_json(const Json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (auto v = parse_double(j.get<std::string>())) return *v;
  }
  throw std::invalid_argument(std::string("report JSON: field '") + field + "' is not a number");
}

inline std::optional<double> optional_from_json(const Json& j, const char* field) {
  if (j.is_null()) return std::nullopt;
  return number_from_json(j, field);
}

}  // namespace detail

inline Json to_json(const ConvergenceReport& r) {
  Json j;
  j["family"] = r.family;
  j["regime"] = to_string(r.regime);
  j["scaling"] = r.scaling.empty() ? Json(nullptr) : Json(r.scaling);
  j["verdict"] = to_string(r.verdict);
  j["tolerances"] = {{"ld_rel", r.tolerances.ld_rel},
                     {"md_rel", r.tolerances.md_rel},
                     {"weak_abs", r.tolerances.weak_abs},
                     {"monotone_slack", r.tolerances.monotone_slack}};
  j["notes"] = r.notes;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"x", detail::number_to_json(row.x)},
                    {"log_p_exact", detail::number_to_json(row.log_p_exact)},
                    {"log_p_mc", row.log_p_mc ? detail::number_to_json(*row.log_p_mc) : Json(nullptr)},
                    {"stderr_log", row.stderr_log ? detail::number_to_json(*row.stderr_log) : Json(nullptr)},
                    {"s_n", detail::number_to_json(row.s_n)},
                    {"normalized_rate", detail::number_to_json(row.normalized_rate)},
                    {"rate_target", detail::number_to_json(row.rate_target)},
                    {"residual", detail::number_to_json(row.residual)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

inline ConvergenceReport report_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("report JSON: top level must be an object");
  ConvergenceReport r;
  try {
    r.family = j.at("family").get<std::string>();
    const auto regime = parse_regime(j.at("regime").get<std::string>());
    if (!regime) throw std::invalid_argument("report JSON: unknown regime");
    r.regime = *regime;
    if (j.contains("scaling") && !j["scaling"].is_null()) r.scaling = j["scaling"].get<std::string>();
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      r.tolerances.ld_rel = t.value("ld_rel", r.tolerances.ld_rel);
      r.tolerances.md_rel = t.value("md_rel", r.tolerances.md_rel);
      r.tolerances.weak_abs = t.value("weak_abs", r.tolerances.weak_abs);
      r.tolerances.monotone_slack = t.value("monotone_slack", r.tolerances.monotone_slack);
    }
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
      ReportRow row;
      row.n = jr.at("n").get<std::int64_t>();
      row.x = detail::number_from_json(jr.at("x"), "x");
      row.log_p_exact = detail::number_from_json(jr.at("log_p_exact"), "log_p_exact");
      row.log_p_mc = detail::optional_from_json(jr.value("log_p_mc", Json(nullptr)), "log_p_mc");
      row.stderr_log = detail::optional_from_json(jr.value("stderr_log", Json(nullptr)), "stderr_log");
      row.s_n = detail::number_from_json(jr.at("s_n"), "s_n");
      row.normalized_rate = detail::number_from_json(jr.at("normalized_rate"), "normalized_rate");
      row.rate_target = detail::number_from_json(jr.at("rate_target"), "rate_target");
      row.residual = detail::number_from_json(jr.at("residual"), "residual");
      r.rows.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report JSON: ") + e.what());
  }
  r.verdict = evaluate_verdict(r);
  if (j.contains("verdict")) {
    const auto stored = parse_verdict(j["verdict"].get<std::string>());
    if (!stored) throw std::invalid_argument("report JSON: unknown verdict");
  }
  return r;
}

inline ConvergenceReport read_report(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report JSON: ") + e.what());
  }
  return report_from_json(j);
}

/// Rows of all reports sorted by (regime, x, n), as one report per regime
/// would list them after a merge.
inline std::vector<std::pair<const ConvergenceReport*, const ReportRow*>> merged_rows(
    const std::vector<ConvergenceReport>& reports) {
  std::vector<std::pair<const ConvergenceReport*, const ReportRow*>> out;
  for (const auto& r : reports) {
    for (const auto& row : r.rows) out.emplace_back(&r, &row);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tuple(static_cast<int>(a.first->regime), a.second->x, a.second->n) <
           std::tuple(static_cast<int>(b.first->regime), b.second->x, b.second->n);
  });
  return out;
}

inline void write_merged_csv(std::ostream& os, const std::vector<ConvergenceReport>& reports) {
  os << kCsvHeader << '\n';
  for (const auto& [r, row] : merged_rows(reports)) {
    os << detail::csv_field(r->family) << ',' << to_string(r->regime) << ',' << detail::csv_field(r->scaling) << ','
       << row->n << ',' << format_double(row->x) << ',' << format_double(row->log_p_exact) << ','
       << detail::csv_opt(row->log_p_mc) << ',' << detail::csv_opt(row->stderr_log) << ','
       << format_double(row->s_n) << ',' << format_double(row->normalized_rate) << ','
       << format_double(row->rate_target) << ',' << format_double(row->residual) << '\n';
  }
}

/// Smallest |residual| drawn on the log axis; exact zeros are pinned here.
inline constexpr double kSvgResidualFloor = 1e-17;

/**
 * Static SVG 1.1 plot of |residual| against n on log-log axes, one polyline
 * per x value across the given reports.
 */
inline std::string render_svg(const std::vector<const ConvergenceReport*>& reports, const std::string& title) {
  std::map<double, std::vector<std::pair<double, double>>> series;
  for (const auto* r : reports) {
    for (const auto& row : r->rows) {
      double res = std::abs(row.residual);
      if (std::isnan(res)) continue;
      if (!std::isfinite(res)) res = 1e300;
      series[row.x].emplace_back(static_cast<double>(row.n), std::max(res, kSvgResidualFloor));
    }
  }
  double nmin = kInf, nmax = -kInf, rmin = kInf, rmax = -kInf;
  for (auto& [x, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [n, r] : pts) {
      nmin = std::min(nmin, n);
      nmax = std::max(nmax, n);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
  }
  if (series.empty()) {
    nmin = 1;
    nmax = 10;
    rmin = 1e-3;
    rmax = 1;
  }
  const double lx0 = std::floor(std::log10(nmin));
  const double lx1 = std::max(lx0 + 1.0, std::ceil(std::log10(nmax)));
  const double ly0 = std::floor(std::log10(rmin));
  const double ly1 = std::max(ly0 + 1.0, std::ceil(std::log10(rmax)));
  const double W = 640, H = 420, L = 70, R = 130, T = 40, B = 50;
  auto px = [&](double n) { return L + (std::log10(n) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double r) { return H - B - (std::log10(r) - ly0) / (ly1 - ly0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream s;
  s << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
    << R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width=")" << W << "\" height=\"" << H << "\">\n"
    << "<title>" << title << "</title>\n"
    << R"(<rect x="0" y="0" width=")" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<g id=\"axes\" stroke=\"black\">\n"
    << "<line id=\"x-axis\" x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n"
    << "<line id=\"y-axis\" x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n"
    << "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double e = lx0; e <= lx1; e += 1.0) {
    s << "<text x=\"" << px(std::pow(10.0, e)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">1e"
      << static_cast<int>(e) << "</text>\n";
  }
  const double ystep = std::max(1.0, std::ceil((ly1 - ly0) / 10.0));
  for (double e = ly0; e <= ly1; e += ystep) {
    s << "<text x=\"" << L - 6 << "\" y=\"" << py(std::pow(10.0, e)) + 4 << "\" text-anchor=\"end\">1e"
      << static_cast<int>(e) << "</text>\n";
  }
  s << "</g>\n"
    << "<text id=\"x-label\" x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">n</text>\n"
    << "<text id=\"y-label\" x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">|residual|</text>\n"
    << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">" << title << "</text>\n";
  std::size_t k = 0;
  for (const auto& [x, pts] : series) {
    const char* c = colors[k % 8];
    s << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" data-x=\"" << format_double(x)
      << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s << (i ? " " : "") << px(pts[i].first) << ',' << py(pts[i].second);
    }
    s << "\"/>\n";
    s << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 14 * (k + 1) << "\" fill=\"" << c
      << "\" font-family=\"sans-serif\" font-size=\"11\">x = " << format_double(x) << "</text>\n";
    ++k;
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace ncmd

#endif  // NCMD_REPORT_IO_HPP
