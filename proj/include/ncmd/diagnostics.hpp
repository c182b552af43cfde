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

#ifndef NCMD_DIAGNOSTICS_HPP
#define NCMD_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncmd/distributions.hpp"
#include "ncmd/families.hpp"
#include "ncmd/format.hpp"
#include "ncmd/montecarlo.hpp"
#include "ncmd/scalings.hpp"

namespace ncmd {

enum class Regime { LD, MD, WEAK };
enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::LD: return "LD";
    case Regime::MD: return "MD";
    case Regime::WEAK: return "WEAK";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::optional<Regime> parse_regime(std::string_view s) {
  if (s == "LD" || s == "ld") return Regime::LD;
  if (s == "MD" || s == "md") return Regime::MD;
  if (s == "WEAK" || s == "weak") return Regime::WEAK;
  return std::nullopt;
}

inline std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  return std::nullopt;
}

struct Tolerances {
  /// LD: |residual| at the largest n must be <= ld_rel (1 + I_LD(x)).
  double ld_rel = 0.05;
  /// MD: |residual| at the largest n must be <= md_rel (1 + I_MD(x)).
  double md_rel = 0.05;
  /// WEAK: sup distance at the largest n must be <= weak_abs.
  double weak_abs = 0.05;
  /// Allowed growth between consecutive |residual| values.
  double monotone_slack = 1e-12;
};

struct McOptions {
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// One (n, x) point. For WEAK rows normalized_rate holds P(k_n C_n <= x),
/// rate_target the limit CDF, and s_n the weak scale k_n.
struct ReportRow {
  std::int64_t n = 0;
  double x = 0.0;
  double log_p_exact = kNaN;
  std::optional<double> log_p_mc;
  std::optional<double> stderr_log;
  double s_n = kNaN;
  double normalized_rate = kNaN;
  double rate_target = kNaN;
  double residual = kNaN;
};

struct ConvergenceReport {
  std::string family;
  Regime regime = Regime::LD;
  std::string scaling;
  std::vector<ReportRow> rows;
  Verdict verdict = Verdict::inconclusive;
  Tolerances tolerances;
  std::vector<std::string> notes;
};

/// Sup over x of |residual| for each n, in increasing n.
inline std::vector<std::pair<std::int64_t, double>> sup_distance_by_n(const ConvergenceReport& r) {
  std::map<std::int64_t, double> sup;
  for (const auto& row : r.rows) {
    auto& s = sup.try_emplace(row.n, 0.0).first->second;
    const double d = std::abs(row.residual);
    s = std::isnan(d) || std::isnan(s) ? kNaN : std::max(s, d);
  }
  return {sup.begin(), sup.end()};
}

namespace detail {

inline bool non_increasing_with_slack(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

}  // namespace detail

/**
 * Verdict from rows and tolerances alone. LD and MD rows are grouped by x:
 * for a finite target the |residual| sequence over increasing n must be
 * non-increasing and end within tolerance; for an infinite target every
 * log_p must be -inf or the normalized rate must be strictly increasing.
 * WEAK uses the sup distance per n. Missing or NaN rows give inconclusive.
 */
inline Verdict evaluate_verdict(const ConvergenceReport& r) {
  if (r.rows.empty()) return Verdict::inconclusive;
  const auto& tol = r.tolerances;
  if (r.regime == Regime::WEAK) {
    const auto sup = sup_distance_by_n(r);
    std::vector<double> d;
    for (const auto& [n, v] : sup) {
      if (std::isnan(v)) return Verdict::inconclusive;
      d.push_back(v);
    }
    const bool ok = detail::non_increasing_with_slack(d, tol.monotone_slack) && d.back() <= tol.weak_abs;
    return ok ? Verdict::pass : Verdict::fail;
  }
  std::map<double, std::vector<const ReportRow*>> by_x;
  for (const auto& row : r.rows) by_x[row.x].push_back(&row);
  const double rel = r.regime == Regime::LD ? tol.ld_rel : tol.md_rel;
  Verdict out = Verdict::pass;
  for (auto& [x, rows] : by_x) {
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->n < b->n; });
    Verdict v = Verdict::pass;
    const double target = rows.front()->rate_target;
    bool nan = false;
    for (auto* row : rows) nan = nan || std::isnan(row->normalized_rate) || std::isnan(row->rate_target);
    if (nan) {
      v = Verdict::inconclusive;
    } else if (target == kInf) {
      bool all_null = true;
      bool increasing = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        all_null = all_null && rows[i]->log_p_exact == -kInf;
        if (i > 0 && !(rows[i]->normalized_rate > rows[i - 1]->normalized_rate)) increasing = false;
      }
      v = (all_null || (rows.size() > 1 && increasing)) ? Verdict::pass : Verdict::fail;
    } else {
      std::vector<double> res;
      for (auto* row : rows) res.push_back(std::abs(row->residual));
      const bool ok = detail::non_increasing_with_slack(res, tol.monotone_slack) && res.back() <= rel * (1.0 + target);
      v = ok ? Verdict::pass : Verdict::fail;
    }
    out = detail::combine(out, v);
  }
  return out;
}

namespace detail {

inline void require_decades(std::span<const std::int64_t> n_list, const char* who) {
  if (n_list.empty()) throw std::invalid_argument(std::string(who) + ": n_list is empty");
  const auto [lo, hi] = std::minmax_element(n_list.begin(), n_list.end());
  if (!(*hi >= 1000 * *lo)) throw std::invalid_argument(std::string(who) + ": n_list must span at least 3 decades");
}

inline void require_min_n(const Family& fam, std::span<const std::int64_t> n_list) {
  for (auto n : n_list) {
    if (n < fam.min_n()) {
      throw std::invalid_argument(fam.name() + ": n = " + std::to_string(n) + " is below the least valid n " +
                                  std::to_string(fam.min_n()));
    }
  }
}

/// Exact log tails at one n for thresholds on C_n, with the side picked per
/// point by the sign of the scaled x. Errors become NaN with a note.
inline std::vector<double> tails_at(const Family& fam, std::int64_t n, const std::vector<double>& xs,
                                    const std::vector<double>& thresholds, std::vector<std::string>& notes) {
  std::vector<double> out(xs.size(), kNaN);
  for (Side side : {Side::upper, Side::lower}) {
    std::vector<std::size_t> idx;
    std::vector<double> th;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if ((xs[i] > 0.0) == (side == Side::upper)) {
        idx.push_back(i);
        th.push_back(thresholds[i]);
      }
    }
    if (idx.empty()) continue;
    try {
      const auto v = fam.exact_log_tails(n, th, side);
      for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = v[k];
    } catch (const std::exception& e) {
      notes.push_back("n = " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

inline void attach_mc(const Family& fam, ReportRow& row, double threshold, Side side, const McOptions& mc) {
  if (mc.trials <= 0) return;
  const auto est = mc_log_tail(fam, row.n, threshold, side, mc.trials, mc.seed, mc.workers);
  row.log_p_mc = est.log_p_hat;
  row.stderr_log = est.stderr_log;
}

}  // namespace detail

/// Large deviations at speed v_n: -log P(C_n beyond x) / v_n against I_LD(x).
/// Upper tails for x > 0, lower tails for x < 0.
inline ConvergenceReport ldp_probe(const Family& fam, std::span<const double> x_list, std::span<const std::int64_t> n_list,
                                   const Tolerances& tol = {}, const McOptions& mc = {}) {
  for (double x : x_list) {
    if (x == 0.0 || !std::isfinite(x)) throw std::invalid_argument("ldp_probe: x values must be finite and nonzero");
  }
  detail::require_decades(n_list, "ldp_probe");
  detail::require_min_n(fam, n_list);
  ConvergenceReport r;
  r.family = fam.spec();
  r.regime = Regime::LD;
  r.tolerances = tol;
  std::vector<double> xs(x_list.begin(), x_list.end());
  for (auto n : n_list) {
    const auto lp = detail::tails_at(fam, n, xs, xs, r.notes);
    const double v = fam.speed(n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ReportRow row;
      row.n = n;
      row.x = xs[i];
      row.log_p_exact = lp[i];
      row.s_n = v;
      row.normalized_rate = -lp[i] / v;
      row.rate_target = fam.rate_ld()(xs[i]);
      row.residual = row.normalized_rate - row.rate_target;
      if (row.rate_target == kInf && row.normalized_rate == kInf) row.residual = 0.0;
      detail::attach_mc(fam, row, xs[i], xs[i] > 0.0 ? Side::upper : Side::lower, mc);
      r.rows.push_back(row);
    }
  }
  r.verdict = evaluate_verdict(r);
  return r;
}

/// Beyond this n the Gumbel characteristic level is no longer resolved in
/// double precision for the catalog laws, so MD probes skip those rows.
inline constexpr std::int64_t kGumbelMdNCap = 10'000'000'000'000'000;

/**
 * Moderate deviations at speed 1/a_n for a_n v_n C_n (sqrt(a_n v_n) C_n for
 * classical sums): -a_n log P against I_MD(x). Refuses scalings rejected by
 * validate().
 */
inline ConvergenceReport md_probe(const Family& fam, const ScalingFamily& scaling, std::span<const double> x_list,
                                  std::span<const std::int64_t> n_list, const Tolerances& tol = {},
                                  const McOptions& mc = {}) {
  for (double x : x_list) {
    if (x == 0.0 || !std::isfinite(x)) throw std::invalid_argument("md_probe: x values must be finite and nonzero");
  }
  if (n_list.empty()) throw std::invalid_argument("md_probe: n_list is empty");
  detail::require_min_n(fam, n_list);
  const auto [lo_it, hi_it] = std::minmax_element(n_list.begin(), n_list.end());
  const std::int64_t lo = std::max<std::int64_t>(*lo_it, fam.min_n());
  const auto check = validate(scaling, fam, lo, std::max<std::int64_t>(*hi_it, 1000 * lo));
  if (!check.accepted()) {
    std::string why;
    if (!check.a_to_0.holds) why += " a_n -> 0 fails (" + check.a_to_0.note + ");";
    if (!check.av_to_inf.holds) why += " a_n v_n -> inf fails (" + check.av_to_inf.note + ");";
    if (check.alogn_to_0.evaluated && !check.alogn_to_0.holds) {
      why += " a_n log n -> 0 fails (" + check.alogn_to_0.note + ");";
    }
    throw std::invalid_argument("scaling " + scaling.spec() + " is not admissible for " + fam.spec() + ":" + why);
  }
  ConvergenceReport r;
  r.family = fam.spec();
  r.regime = Regime::MD;
  r.scaling = scaling.spec();
  r.tolerances = tol;
  std::vector<double> xs(x_list.begin(), x_list.end());
  for (auto n : n_list) {
    if (fam.kind() == FamilyKind::gumbel_maxima && n > kGumbelMdNCap) {
      r.notes.push_back("n = " + std::to_string(n) + " skipped: gumbel_maxima MD rows are capped at n = 1e16");
      continue;
    }
    const double a = scaling.a(fam, n);
    const double k = fam.md_scale(n, a);
    std::vector<double> th;
    for (double x : xs) th.push_back(x / k);
    const auto lp = detail::tails_at(fam, n, xs, th, r.notes);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ReportRow row;
      row.n = n;
      row.x = xs[i];
      row.log_p_exact = lp[i];
      row.s_n = 1.0 / a;
      row.normalized_rate = -a * lp[i];
      row.rate_target = fam.rate_md()(xs[i]);
      row.residual = row.normalized_rate - row.rate_target;
      if (row.rate_target == kInf && row.normalized_rate == kInf) row.residual = 0.0;
      detail::attach_mc(fam, row, th[i], xs[i] > 0.0 ? Side::upper : Side::lower, mc);
      r.rows.push_back(row);
    }
  }
  r.verdict = evaluate_verdict(r);
  return r;
}

/// Linear grid of `count` points between the 0.005 and 0.995 quantiles of
/// the family's weak limit.
inline std::vector<double> default_weak_grid(const Family& fam, int count = 41) {
  auto q = [&](double p) {
    return detail::bracket_and_bisect([&](double x) { return fam.limit_cdf(x); }, p, 0.0, -1e6, 1e6);
  };
  const double lo = q(0.005);
  const double hi = q(0.995);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

/// Sup over the grid of |P(k_n C_n <= x) - limit_cdf(x)| per n, from exact
/// lower tails.
inline ConvergenceReport weak_probe(const Family& fam, std::span<const std::int64_t> n_list,
                                    std::span<const double> x_grid, const Tolerances& tol = {},
                                    const McOptions& mc = {}) {
  if (x_grid.size() < 41) throw std::invalid_argument("weak_probe: x_grid needs at least 41 points");
  const double lo = *std::min_element(x_grid.begin(), x_grid.end());
  const double hi = *std::max_element(x_grid.begin(), x_grid.end());
  if (fam.limit_cdf(lo) > 0.005 + 1e-12 || fam.limit_cdf(hi) < 0.995 - 1e-12) {
    throw std::invalid_argument("weak_probe: x_grid must cover the central 99% of the limit law");
  }
  if (n_list.empty()) throw std::invalid_argument("weak_probe: n_list is empty");
  detail::require_min_n(fam, n_list);
  ConvergenceReport r;
  r.family = fam.spec();
  r.regime = Regime::WEAK;
  r.tolerances = tol;
  std::vector<double> xs(x_grid.begin(), x_grid.end());
  for (auto n : n_list) {
    const double k = fam.weak_scale(n);
    std::vector<double> th;
    for (double x : xs) th.push_back(x / k);
    std::vector<double> lp(xs.size(), kNaN);
    try {
      lp = fam.exact_log_tails(n, th, Side::lower);
    } catch (const std::exception& e) {
      r.notes.push_back("n = " + std::to_string(n) + ": " + e.what());
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ReportRow row;
      row.n = n;
      row.x = xs[i];
      row.log_p_exact = lp[i];
      row.s_n = k;
      row.normalized_rate = std::exp(lp[i]);
      row.rate_target = fam.limit_cdf(xs[i]);
      row.residual = row.normalized_rate - row.rate_target;
      detail::attach_mc(fam, row, th[i], Side::lower, mc);
      r.rows.push_back(row);
    }
  }
  r.verdict = evaluate_verdict(r);
  return r;
}

inline ConvergenceReport weak_probe(const Family& fam, std::span<const std::int64_t> n_list,
                                    const Tolerances& tol = {}, const McOptions& mc = {}) {
  const auto grid = default_weak_grid(fam);
  return weak_probe(fam, n_list, grid, tol, mc);
}

struct SideSlope {
  bool applicable = false;
  double ld_difference = kNaN;
  double md_slope = kNaN;
  double tolerance = kNaN;
  bool pass = true;
};

struct SlopeReport {
  std::string family;
  double h = kNaN;
  bool second_order = false;
  SideSlope right;
  SideSlope left;
  /// Classical sums: (I(h) - 2 I(0) + I(-h)) / h^2 against 1/sigma^2.
  double second_difference = kNaN;
  double second_target = kNaN;
  bool second_pass = true;
  [[nodiscard]] bool pass() const { return right.pass && left.pass && second_pass; }
};

/**
 * One-sided difference quotients of I_LD at 0 against the slopes of I_MD,
 * within max(1e-6, 10 h), on each side where I_MD is finite. Classical sums
 * compare the second difference of I_LD with 1/sigma^2 within 1e-4.
 */
inline SlopeReport slope_identity_check(const Family& fam, double h = 1e-6) {
  if (!(h > 0.0 && h <= 1e-3)) throw std::invalid_argument("slope_identity_check: h must lie in (0, 1e-3]");
  SlopeReport out;
  out.family = fam.spec();
  out.h = h;
  const auto& ld = fam.rate_ld();
  const auto& md = fam.rate_md();
  if (fam.kind() == FamilyKind::classical_sums) {
    out.second_order = true;
    const double s = fam.classical().sigma;
    out.second_difference = (ld(h) - 2.0 * ld(0.0) + ld(-h)) / (h * h);
    out.second_target = 1.0 / (s * s);
    out.second_pass = std::abs(out.second_difference - out.second_target) <= 1e-4;
    return out;
  }
  const double tol = std::max(1e-6, 10.0 * h);
  auto side = [&](double dir) {
    SideSlope s;
    s.applicable = std::isfinite(md(dir));
    if (!s.applicable) return s;
    s.ld_difference = dir > 0.0 ? (ld(h) - ld(0.0)) / h : (ld(0.0) - ld(-h)) / h;
    s.md_slope = dir > 0.0 ? md.right_slope_at_zero() : md.left_slope_at_zero();
    s.tolerance = tol;
    s.pass = std::abs(s.ld_difference - s.md_slope) <= tol;
    return s;
  };
  out.right = side(1.0);
  out.left = side(-1.0);
  return out;
}

}  // namespace ncmd

#endif  // NCMD_DIAGNOSTICS_HPP
