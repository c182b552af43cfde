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

// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "ncmd/ncmd.hpp"

using namespace ncmd;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

std::vector<std::int64_t> decades(int lo, int hi) {
  std::vector<std::int64_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(static_cast<std::int64_t>(std::llround(std::pow(10.0, k))));
  return out;
}

double max_sup(const ConvergenceReport& r) {
  double s = 0.0;
  for (const auto& [n, d] : sup_distance_by_n(r)) s = std::max(s, d);
  return s;
}

double sup_at(const ConvergenceReport& r, std::int64_t n) {
  for (const auto& [m, d] : sup_distance_by_n(r)) {
    if (m == n) return d;
  }
  return kNaN;
}

/// P(T_n <= m), m = 0..m_max, from n! S(m, n) / n^m in exact integers.
std::vector<double> coupon_cdf_exact(int n, int m_max) {
  using boost::multiprecision::cpp_int;
  using mp = boost::multiprecision::cpp_bin_float_50;
  std::vector<cpp_int> S(static_cast<std::size_t>(n + 1), 0);
  S[0] = 1;
  cpp_int fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  std::vector<double> out(static_cast<std::size_t>(m_max + 1), 0.0);
  cpp_int pow_n = 1;
  for (int m = 1; m <= m_max; ++m) {
    for (int k = n; k >= 1; --k) S[k] = k * S[k] + S[k - 1];
    S[0] = 0;
    pow_n *= n;
    if (m >= n) out[static_cast<std::size_t>(m)] = static_cast<double>(mp(fact * S[n]) / mp(pow_n));
  }
  return out;
}

void minima_exactness(Outcome& o) {
  const auto fam = make_minima(parse_distribution("exponential:1"));
  const std::vector<double> xs{0.5, 1.0, 2.0};
  double worst = 0.0;
  for (double g : {0.3, 0.5, 0.7}) {
    const auto r = md_probe(fam, ScalingFamily::power(g), xs, decades(2, 6));
    for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.normalized_rate - row.x));
  }
  o.detail << "max |rate - x| = " << worst;
  o.require(worst <= 1e-12, "max |rate - x| <= 1e-12");
}

void minima_weak(Outcome& o) {
  const auto ex = weak_probe(make_minima(parse_distribution("exponential:1")), decades(0, 6));
  const auto un = weak_probe(make_minima(parse_distribution("uniform01")), std::vector<std::int64_t>{10000});
  const double se = max_sup(ex);
  const double su = sup_at(un, 10000);
  o.detail << "Exp(1) sup = " << se << ", uniform01 sup at 1e4 = " << su;
  o.require(se < 1e-12, "Exp(1) sup < 1e-12");
  o.require(su < 0.01, "uniform01 sup < 0.01");
}

void gumbel_identities(Outcome& o) {
  double worst_m = 0.0, worst_h = 0.0, worst_ratio = 0.0;
  std::vector<double> ns;
  for (int k = 2; k <= 16; ++k) ns.push_back(std::pow(10.0, k));
  for (double a : {1.0, 2.0, 3.0}) {
    const auto d = catalog_get("weibull", {a});
    const auto p = make_profile(d);
    for (double n : ns) {
      const double ln = std::log(n);
      worst_m = std::max(worst_m, std::abs(characteristic_level(d, n) / std::pow(ln, 1.0 / a) - 1.0));
      worst_h = std::max(worst_h, std::abs(normalizing_rate(d, n) / (a * ln) - 1.0));
    }
    for (double r : hn_trend(p, ns)) worst_ratio = std::max(worst_ratio, std::abs(r - 1.0));
  }
  const auto np = make_profile(catalog_get("std_normal"));
  const auto tr = hn_trend(np, std::vector<double>{1e4, 1e8, 1e12});
  const bool decreasing = std::abs(tr[1] - 1) < std::abs(tr[0] - 1) && std::abs(tr[2] - 1) < std::abs(tr[1] - 1);
  const double ell = ell_probe(np, tail_grid(np.dist)).estimate();
  o.detail << "weibull m_n rel err " << worst_m << ", h_n rel err " << worst_h << ", hn_trend dev " << worst_ratio
           << "; normal |h_n/(2 log n) - 1| = " << std::abs(tr[0] - 1) << ", " << std::abs(tr[1] - 1) << ", "
           << std::abs(tr[2] - 1) << ", ell = " << ell;
  o.require(worst_m <= 1e-9, "m_n within 1e-9");
  o.require(worst_h <= 1e-9, "h_n within 1e-9");
  o.require(worst_ratio <= 1e-12, "hn_trend within 1e-12");
  o.require(decreasing, "normal h_n deviation strictly decreasing");
  o.require(ell >= 0.4 && ell <= 0.6, "normal ell in [0.4, 0.6]");
}

void gumbel_regimes(Outcome& o) {
  const auto fam = make_gumbel_maxima(parse_distribution("weibull:2"));
  const std::vector<double> xs{0.5, 1.0};
  const auto ld = ldp_probe(fam, xs, decades(2, 5));
  const std::vector<double> one{1.0};
  const auto md = md_probe(fam, parse_scaling("pow:0.5"), one, decades(2, 8));
  const auto weak = weak_probe(fam, decades(2, 5));
  const double md_final = std::abs(md.rows.back().residual);
  const double weak_final = sup_at(weak, 100000);
  double ld_final = 0.0;
  for (const auto& row : ld.rows) {
    if (row.n == 100000) ld_final = std::max(ld_final, std::abs(row.residual));
  }
  o.detail << "LD verdict " << to_string(ld.verdict) << " (max final |res| " << ld_final << "), MD final |res| at n=1e8 "
           << md_final << ", weak sup at 1e5 " << weak_final;
  o.require(ld.verdict == Verdict::pass, "LD monotone decay within 0.05(1+I)");
  o.require(md_final < 0.1, "MD final |residual| < 0.1");
  o.require(weak_final < 0.05, "weak sup < 0.05");
}

void coupon_oracles(Outcome& o) {
  double worst_ie = 0.0, worst_exact = 0.0;
  int admitted = 0, refused = 0;
  for (int n = 1; n <= 60; ++n) {
    const auto dp = coupon_cdf_table(n, 20 * n);
    std::vector<double> exact;
    for (int m = n; m <= 20 * n; ++m) {
      try {
        worst_ie = std::max(worst_ie, std::abs(coupon_cdf_inclusion_exclusion(n, m) - dp[m]));
        ++admitted;
      } catch (const CancellationError&) {
        if (exact.empty()) exact = coupon_cdf_exact(n, 20 * n);
        worst_exact = std::max(worst_exact, std::abs(exact[m] - dp[m]));
        ++refused;
      }
    }
  }
  const double p33 = coupon_cdf_dp(3, 3);
  const double p23 = coupon_cdf_dp(2, 3);
  bool dominated = true;
  for (std::int64_t n : {5, 10, 50, 200}) {
    const double nl = static_cast<double>(n) * std::log(static_cast<double>(n));
    for (double c : {1.25, 1.5, 2.0}) {
      const auto up_m = static_cast<std::int64_t>(std::floor(c * nl)) + 1;  // T_n > c n log n
      const auto b = coupon_paper_bounds(n, c, n);
      dominated = dominated && coupon_upper_dp(n, up_m) <= b.upper_tail_bound;
      for (std::int64_t m : {n, static_cast<std::int64_t>(std::floor(nl / c)), static_cast<std::int64_t>(std::floor(c * nl))}) {
        dominated = dominated && coupon_cdf_dp(n, m) <= coupon_paper_bounds(n, c, m).lower_tail_bound;
      }
    }
  }
  o.detail << "DP vs inclusion-exclusion max diff " << worst_ie << " on " << admitted << " points; DP vs exact counts "
           << worst_exact << " on " << refused << " refused points; P(T3<=3) err " << std::abs(p33 - 2.0 / 9.0)
           << ", P(T2<=3) err " << std::abs(p23 - 0.75);
  o.require(worst_ie <= 1e-9, "DP vs IE within 1e-9");
  o.require(worst_exact <= 1e-9, "DP vs exact within 1e-9 where IE is refused");
  o.require(std::abs(p33 - 2.0 / 9.0) <= 1e-12 && std::abs(p23 - 0.75) <= 1e-12, "small cases");
  o.require(dominated, "bounds dominate exact tails");
}

void coupon_regimes(Outcome& o) {
  const auto fam = make_coupon();
  const auto weak = weak_probe(fam, std::vector<std::int64_t>{1000});
  const std::vector<double> one{1.0};
  const auto md = md_probe(fam, parse_scaling("pow:0.5"), one, std::vector<std::int64_t>{2000});
  const double s = sup_at(weak, 1000);
  const double rate = md.rows.front().normalized_rate;
  o.detail << "weak sup at 1000 = " << s << ", MD rate at n=2000 = " << rate;
  o.require(s < 0.05, "weak sup < 0.05");
  o.require(std::abs(rate - 1.0) <= 0.15, "MD rate within 0.15 of 1");
}

void replacement_exactness(Outcome& o) {
  const auto fam = parse_family("replacement:exponential:1,exponential:2,t=1,beta=0.4");
  const std::vector<double> half{0.5};
  const auto ld = ldp_probe(fam, half, decades(1, 5));
  double worst = 0.0, res_1e4 = kNaN;
  for (const auto& row : ld.rows) {
    const double n = static_cast<double>(row.n);
    worst = std::max(worst, std::abs(row.normalized_rate - (1.0 - std::log(0.6) / n)));
    if (row.n == 10000) res_1e4 = row.residual;
  }
  const double right = fam.rate_md().right_slope_at_zero();
  const double left = -fam.rate_md().left_slope_at_zero();
  const double left_want = std::exp(-1.0) / (1.0 - std::exp(-1.0));
  double mass = 0.0;
  for (auto n : decades(0, 8)) mass = std::max(mass, std::abs(std::exp(fam.exact_log_lower_tail(n, 0.0)) - 0.4));
  const double sup = sup_at(weak_probe(fam, std::vector<std::int64_t>{10000}), 10000);
  bool rejected = false;
  try {
    const std::vector<double> one{1.0};
    (void)md_probe(fam, parse_scaling("logpow:0.5"), one, decades(2, 5));
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  const auto v = validate(parse_scaling("logpow:0.5"), fam, 100, 100000);
  o.detail << "LD max |rate - (1 - log 0.6/n)| = " << worst << ", residual at 1e4 = " << res_1e4 << ", slopes " << right
           << " / " << left << ", max |P(C_n<=0) - 0.4| = " << mass << ", weak sup = " << sup;
  o.require(worst <= 1e-12, "LD normalized rate exact");
  o.require(std::abs(res_1e4 - std::abs(std::log(0.6)) / 1e4) <= 1e-12 && res_1e4 < 6e-5, "residual |log 0.6|/n");
  o.require(std::abs(right - 2.0) <= 1e-9 && std::abs(left - left_want) <= 1e-9, "MD slopes");
  o.require(mass <= 1e-12, "P(C_n <= 0) = 0.4");
  o.require(sup < 0.01, "weak sup < 0.01");
  o.require(rejected && !v.accepted() && !v.alogn_to_0.holds, "logpow:0.5 rejected");
}

void classical_prototype(Outcome& o) {
  const auto fam = make_classical(1.0);
  const std::vector<double> one{1.0};
  const auto md = md_probe(fam, parse_scaling("pow:0.5"), one, std::vector<std::int64_t>{1000000});
  const auto s = slope_identity_check(fam, 1e-3);
  const double rate = md.rows.front().normalized_rate;
  o.detail << "MD rate at 1e6 = " << rate << ", I_LD second difference = " << s.second_difference;
  o.require(std::abs(rate - 0.5) <= 0.05, "MD rate within 0.05 of 1/2");
  o.require(std::abs(s.second_difference - 1.0) <= 1e-4, "second difference 1/sigma^2");
}

void mc_integrity(Outcome& o) {
  struct Case {
    const char* fam;
    std::int64_t n;
    double x;
    Side side;
  };
  const std::vector<Case> cases{
      {"minima:exponential:1", 10, 0.05, Side::upper},   {"minima:exponential:1", 10, 0.2, Side::upper},
      {"minima:exponential:1", 100, 0.01, Side::upper},  {"minima:exponential:1", 5, 0.1, Side::lower},
      {"minima:uniform01", 10, 0.1, Side::upper},        {"minima:uniform01", 50, 0.02, Side::lower},
      {"minima:gamma:1", 20, 0.1, Side::upper},          {"gumbel_maxima:weibull:2", 100, 0.1, Side::upper},
      {"gumbel_maxima:weibull:2", 100, -0.1, Side::lower}, {"gumbel_maxima:weibull:2", 1000, 0.05, Side::upper},
      {"gumbel_maxima:std_normal", 100, 0.1, Side::upper}, {"gumbel_maxima:std_normal", 1000, -0.05, Side::lower},
      {"gumbel_maxima:logistic", 100, 0.2, Side::upper}, {"coupon", 2, 1.0, Side::upper},
      {"coupon", 10, 0.2, Side::upper},                  {"coupon", 50, 0.0, Side::lower},
      {"coupon", 50, 0.3, Side::upper},                  {"replacement:exponential:1,exponential:2,t=1,beta=0.4", 10, 0.1, Side::upper},
      {"replacement:exponential:1,exponential:2,t=1,beta=0.4", 10, -0.1, Side::lower},
      {"classical:sigma=1", 100, 0.1, Side::upper},
  };
  int agree = 0;
  double worst_z = 0.0;
  bool all_above = true;
  std::uint64_t seed = 1000;
  for (const auto& c : cases) {
    const auto fam = parse_family(c.fam);
    const double lp = c.side == Side::upper ? fam.exact_log_upper_tail(c.n, c.x) : fam.exact_log_lower_tail(c.n, c.x);
    const double p = std::exp(lp);
    all_above = all_above && p >= 1e-3;
    const auto e = mc_log_tail(fam, c.n, c.x, c.side, 100000, ++seed, 4);
    const double se = std::sqrt(p * (1.0 - p) / 1e5);
    const double z = std::abs(e.p_hat() - p) / se;
    worst_z = std::max(worst_z, z);
    if (z <= 4.0) ++agree;
  }
  bool replay = true;
  {
    const auto fam = parse_family("gumbel_maxima:std_normal");
    const auto base = mc_log_tail(fam, 500, 0.05, Side::upper, 50000, 77, 1);
    for (unsigned w : {2u, 8u}) {
      const auto e = mc_log_tail(fam, 500, 0.05, Side::upper, 50000, 77, w);
      replay = replay && e.hits == base.hits && e.log_p_hat == base.log_p_hat && e.stderr_log == base.stderr_log;
    }
    const auto c = parse_family("coupon");
    const auto cb = mc_log_tail(c, 30, 0.1, Side::upper, 30001, 5, 1);
    for (unsigned w : {2u, 8u}) replay = replay && mc_log_tail(c, 30, 0.1, Side::upper, 30001, 5, w).hits == cb.hits;
  }
  int covered = 0;
  {
    const auto c = parse_family("coupon");
    for (std::uint64_t s = 1; s <= 200; ++s) {
      const auto e = mc_log_tail(c, 2, 1.0, Side::upper, 1000, s);
      if (std::abs(e.p_hat() - 0.5) <= 1.96 * e.stderr_p()) ++covered;
    }
  }
  o.detail << agree << "/20 cases within 4 stderr (worst z " << worst_z << "), replay " << (replay ? "identical" : "DIFFERS")
           << ", coverage " << covered << "/200";
  o.require(all_above, "all cases have p >= 1e-3");
  o.require(agree == 20, "20/20 within 4 stderr");
  o.require(replay, "bit-identical replay over 1/2/8 workers");
  o.require(covered >= 180, "coverage >= 90%");
}

void rate_suite(Outcome& o) {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-3.0 + 0.06 * i);
  int shapes = 0, slopes = 0, total = 0;
  for (const char* spec : {"classical:sigma=1", "minima:exponential:1", "gumbel_maxima:weibull:2", "coupon",
                           "replacement:exponential:1,exponential:2,t=1,beta=0.4"}) {
    const auto fam = parse_family(spec);
    ++total;
    if (check_rate_shape(fam.rate_ld(), grid).ok() && check_rate_shape(fam.rate_md(), grid).ok()) ++shapes;
    if (slope_identity_check(fam, fam.kind() == FamilyKind::classical_sums ? 1e-3 : 1e-6).pass()) ++slopes;
  }
  o.detail << "shape invariants " << shapes << "/" << total << ", slope identities " << slopes << "/" << total;
  o.require(shapes == total, "rate-function invariants");
  o.require(slopes == total, "slope identities");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "minima MD exactness", 1.0, minima_exactness},
      {2, "minima weak limit", 1.0, minima_weak},
      {3, "Gumbel-MDA identities", 5.0, gumbel_identities},
      {4, "Gumbel maxima regimes", 10.0, gumbel_regimes},
      {5, "coupon oracles", 10.0, coupon_oracles},
      {6, "coupon regimes", 60.0, coupon_regimes},
      {7, "replacement exactness", 2.0, replacement_exactness},
      {8, "classical prototype", 1.0, classical_prototype},
      {9, "Monte Carlo integrity", 60.0, mc_integrity},
      {10, "rate-function suite", 1.0, rate_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.ok = false;
      o.detail << " [runtime " << secs << " s over budget " << c.budget_s << " s]";
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %2d: %-24s (%.3f s / %.0f s) %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
