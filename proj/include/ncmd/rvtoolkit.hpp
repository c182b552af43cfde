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

#ifndef NCMD_RVTOOLKIT_HPP
#define NCMD_RVTOOLKIT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncmd/distributions.hpp"

namespace ncmd {

/// Raised when a law is outside the Gumbel maximum domain of attraction
/// setting used here (finite right endpoint, or a non-positive index mu).
class MdaViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class MuSource { declared, estimated };

/**
 * A law in the Gumbel MDA whose hazard reciprocal w = sf / pdf is regularly
 * varying with index 1 - mu, so w(x) = x^(1 - mu) L(x) with L slowly varying.
 */
struct GumbelMdaProfile {
  Distribution dist;
  double mu = 1.0;
  std::optional<std::function<double(double)>> slowly_varying_closed_form;
  MuSource mu_source = MuSource::declared;
};

/// Tabulated mu for catalog members; lognormal reports 0.
inline std::optional<double> declared_mu(const Distribution& d) {
  return std::visit(
      [](const auto& law) -> std::optional<double> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Exponential> || std::is_same_v<T, dist::Gamma> ||
                      std::is_same_v<T, dist::Logistic>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, dist::Weibull>) {
          return law.shape;
        } else if constexpr (std::is_same_v<T, dist::StdNormal>) {
          return 2.0;
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          return 0.0;
        } else {
          return std::nullopt;
        }
      },
      d.variant());
}

inline std::optional<std::function<double(double)>> closed_form_slowly_varying(const Distribution& d) {
  return std::visit(
      [](const auto& law) -> std::optional<std::function<double(double)>> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Exponential>) {
          const double inv = 1.0 / law.rate;
          return [inv](double) { return inv; };
        } else if constexpr (std::is_same_v<T, dist::Weibull>) {
          const double inv = 1.0 / law.shape;
          return [inv](double) { return inv; };
        } else if constexpr (std::is_same_v<T, dist::Gamma>) {
          if (law.shape == 1.0) return [](double) { return 1.0; };
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, dist::Logistic>) {
          return [](double x) { return 1.0 + std::exp(-x); };
        } else {
          return std::nullopt;
        }
      },
      d.variant());
}

inline GumbelMdaProfile make_profile(const Distribution& d, double mu, MuSource source) {
  if (d.upper() != kInf) {
    throw MdaViolation("'" + d.spec() + "' has a finite right endpoint; the Gumbel MDA setting needs an unbounded one");
  }
  if (!(mu > 0.0)) {
    throw MdaViolation("'" + d.spec() + "' has regular-variation index mu = " + format_double(mu) +
                       "; mu must be positive");
  }
  GumbelMdaProfile p{d, mu, std::nullopt, source};
  if (source == MuSource::declared) p.slowly_varying_closed_form = closed_form_slowly_varying(d);
  return p;
}

/// Profile with the tabulated mu of a catalog member.
inline GumbelMdaProfile make_profile(const Distribution& d) {
  const auto mu = declared_mu(d);
  if (!mu) throw MdaViolation("no tabulated regular-variation index for '" + d.spec() + "'");
  return make_profile(d, *mu, MuSource::declared);
}

/// Hazard reciprocal sf(x) / pdf(x), evaluated as exp(log_sf - log_pdf).
inline double w(const Distribution& d, double x) {
  if (!(x > d.lower() && x < d.upper())) {
    throw std::domain_error("w: x = " + format_double(x) + " is outside the support of " + d.spec());
  }
  const double lp = d.log_pdf(x);
  if (lp == -kInf) throw std::domain_error("w: density vanishes at x = " + format_double(x));
  return std::exp(d.log_sf(x) - lp);
}

inline double slowly_varying_part(const GumbelMdaProfile& p, double x) {
  if (!(x > 0.0)) throw std::domain_error("slowly_varying_part: x must be positive");
  return w(p.dist, x) * std::pow(x, p.mu - 1.0);
}

/// m_n = F^{-1}(1 - 1/n), solved on the survival side as log_sf(m_n) = -log n.
/// n is real-valued so that astronomically large levels stay addressable.
inline double characteristic_level(const Distribution& d, double n) {
  if (!(n >= 2.0)) throw std::domain_error("characteristic_level: n must be >= 2");
  return d.inverse_log_sf(-std::log(n));
}

/// h_n = m_n n f(m_n).
inline double normalizing_rate(const Distribution& d, double n) {
  const double m = characteristic_level(d, n);
  const double lp = d.log_pdf(m);
  if (lp == -kInf) throw std::domain_error("normalizing_rate: density vanishes at m_n");
  return m * std::exp(std::log(n) + lp);
}

inline std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("geometric_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double r = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(r * i);
  g.back() = hi;
  return g;
}

/// Geometric far-tail grid between the points where log_sf equals the two
/// given levels (defaults -50 and -700, i.e. inside representable range).
inline std::vector<double> tail_grid(const Distribution& d, double log_sf_start = -50.0, double log_sf_end = -700.0,
                                     int points = 64) {
  const double lo = d.inverse_log_sf(log_sf_start);
  const double hi = d.inverse_log_sf(log_sf_end);
  return geometric_grid(lo, hi, points);
}

struct EllProbe {
  std::vector<double> running_max;
  double grid_upper = kNaN;
  [[nodiscard]] double estimate() const { return running_max.empty() ? kNaN : running_max.back(); }
};

/// Running maxima of -L(x) log_sf(x) / x^mu over an increasing grid.
inline EllProbe ell_probe(const GumbelMdaProfile& p, std::span<const double> x_grid) {
  if (x_grid.empty()) throw std::invalid_argument("ell_probe: empty grid");
  EllProbe out;
  double best = -kInf;
  for (double x : x_grid) {
    const double v = -slowly_varying_part(p, x) * p.dist.log_sf(x) / std::pow(x, p.mu);
    best = std::max(best, v);
    out.running_max.push_back(best);
  }
  out.grid_upper = x_grid.back();
  return out;
}

struct PotterResult {
  bool holds = true;
  double worst_ratio = 0.0;
};

/// Checks L(y)/L(z) <= A max((z/y)^delta, (y/z)^delta) on every pair; the
/// ratio reported is left side over right side, so holds == (worst <= 1).
inline PotterResult potter_check(const GumbelMdaProfile& p, double A, double delta,
                                 std::span<const std::pair<double, double>> pairs) {
  PotterResult out;
  for (auto [y, z] : pairs) {
    const double lhs = slowly_varying_part(p, y) / slowly_varying_part(p, z);
    const double rhs = A * std::max(std::pow(z / y, delta), std::pow(y / z, delta));
    out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  out.holds = out.worst_ratio <= 1.0;
  return out;
}

/// h_n / (mu log n) for each n.
inline std::vector<double> hn_trend(const GumbelMdaProfile& p, std::span<const double> n_list) {
  std::vector<double> out;
  out.reserve(n_list.size());
  for (double n : n_list) out.push_back(normalizing_rate(p.dist, n) / (p.mu * std::log(n)));
  return out;
}

struct RvIndexEstimate {
  double mu_hat = kNaN;
  bool mda_violation = false;
};

inline constexpr double kMdaViolationThreshold = 0.05;

/// mu_hat = 1 - median over the grid of log(w(t x) / w(x)) / log t.
inline RvIndexEstimate estimate_rv_index(const Distribution& d, std::span<const double> x_grid, double t) {
  if (x_grid.size() < 4) throw std::invalid_argument("estimate_rv_index: grid needs at least 4 points");
  if (!(t > 1.0)) throw std::invalid_argument("estimate_rv_index: t must exceed 1");
  std::vector<double> slopes;
  slopes.reserve(x_grid.size());
  const double lt = std::log(t);
  for (double x : x_grid) {
    const double lw_tx = d.log_sf(t * x) - d.log_pdf(t * x);
    const double lw_x = d.log_sf(x) - d.log_pdf(x);
    slopes.push_back((lw_tx - lw_x) / lt);
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t k = slopes.size();
  const double median = k % 2 == 1 ? slopes[k / 2] : 0.5 * (slopes[k / 2 - 1] + slopes[k / 2]);
  RvIndexEstimate out;
  out.mu_hat = 1.0 - median;
  out.mda_violation = out.mu_hat <= kMdaViolationThreshold;
  return out;
}

enum class CheckStatus { pass, fail, not_applicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "n/a";
  }
  return "?";
}

struct LemmaCheck {
  std::string name;
  CheckStatus status = CheckStatus::not_applicable;
  std::string detail;
  std::map<std::string, double> values;
};

struct LemmaSuite {
  std::string dist_spec;
  double mu = kNaN;
  bool mda_violation = false;
  std::string violation_reason;
  std::vector<LemmaCheck> checks;

  [[nodiscard]] bool all_pass() const {
    if (mda_violation) return false;
    return std::none_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.status == CheckStatus::fail; });
  }
};

namespace detail {

/// |seq| non-increasing up to an absolute slack.
inline bool non_increasing_abs(std::span<const double> seq, double slack = 1e-12) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (std::abs(seq[i]) > std::abs(seq[i - 1]) + slack) return false;
  }
  return true;
}

}  // namespace detail

/// Runs the regular-variation checks behind the Gumbel-MDA maxima family:
/// w representation, L(x)/x^mu -> 0, ell <= 1/mu, Potter bound, w(x_n) ~ w(y_n),
/// h_n ~ mu log n, and the index estimate.
inline LemmaSuite run_lemma_suite(const Distribution& d) {
  LemmaSuite suite;
  suite.dist_spec = d.spec();
  GumbelMdaProfile prof{d, 1.0, std::nullopt, MuSource::declared};
  try {
    prof = make_profile(d);
  } catch (const MdaViolation& e) {
    suite.mda_violation = true;
    suite.violation_reason = e.what();
    suite.mu = declared_mu(d).value_or(kNaN);
    return suite;
  }
  suite.mu = prof.mu;
  const auto grid = tail_grid(d);

  {
    LemmaCheck c{"representation", CheckStatus::not_applicable, "w(x) = x^(1-mu) L(x) on the tail grid", {}};
    if (prof.slowly_varying_closed_form) {
      double worst = 0.0;
      for (double x : grid) {
        const double lhs = w(d, x);
        const double rhs = std::pow(x, 1.0 - prof.mu) * (*prof.slowly_varying_closed_form)(x);
        worst = std::max(worst, std::abs(lhs - rhs) / lhs);
      }
      c.values["max_rel_error"] = worst;
      c.status = worst <= 1e-9 ? CheckStatus::pass : CheckStatus::fail;
    }
    suite.checks.push_back(std::move(c));
  }
  {
    // Reaches log_sf = -7000; every catalog tail is evaluated in log domain
    // so the far end stays finite.
    const auto far = tail_grid(d, -50.0, -7000.0, 64);
    std::vector<double> ratio;
    for (double x : far) ratio.push_back(slowly_varying_part(prof, x) / std::pow(x, prof.mu));
    bool decreasing = true;
    for (std::size_t i = ratio.size() / 2 + 1; i < ratio.size(); ++i) decreasing = decreasing && ratio[i] < ratio[i - 1];
    LemmaCheck c{"feller_limit", CheckStatus::fail, "L(x)/x^mu eventually decreasing and below 1e-3", {}};
    c.values["final"] = ratio.back();
    c.values["x_max"] = far.back();
    if (decreasing && ratio.back() < 1e-3) c.status = CheckStatus::pass;
    suite.checks.push_back(std::move(c));
  }
  {
    const auto probe = ell_probe(prof, grid);
    LemmaCheck c{"ell_bound", CheckStatus::fail, "running-max ell estimate <= 1/mu + 0.05", {}};
    c.values["ell_estimate"] = probe.estimate();
    c.values["one_over_mu"] = 1.0 / prof.mu;
    c.values["grid_upper"] = probe.grid_upper;
    if (probe.estimate() <= 1.0 / prof.mu + 0.05) c.status = CheckStatus::pass;
    suite.checks.push_back(std::move(c));
  }
  {
    std::vector<std::pair<double, double>> pairs;
    const auto sub = geometric_grid(grid.front(), grid.back(), 8);
    for (double y : sub)
      for (double z : sub) pairs.emplace_back(y, z);
    const auto res = potter_check(prof, 1.5, 0.5, pairs);
    LemmaCheck c{"potter_bound", res.holds ? CheckStatus::pass : CheckStatus::fail, "A = 1.5, delta = 0.5", {}};
    c.values["worst_ratio"] = res.worst_ratio;
    suite.checks.push_back(std::move(c));
  }
  {
    const std::vector<double> ns{1e6, 1e12, 1e24, 1e48, 1e96};
    std::vector<double> dev;
    for (double n : ns) {
      const double m = characteristic_level(d, n);
      dev.push_back(w(d, m) / w(d, m * (1.0 + 1.0 / std::log(n))) - 1.0);
    }
    LemmaCheck c{"w_ratio", CheckStatus::fail, "w(m_n)/w(m_n(1+1/log n)) -> 1, within 0.02 at n = 1e96", {}};
    c.values["dev_at_1e6"] = dev.front();
    c.values["dev_final"] = dev.back();
    if (detail::non_increasing_abs(dev) && std::abs(dev.back()) <= 0.02) c.status = CheckStatus::pass;
    suite.checks.push_back(std::move(c));
  }
  {
    std::vector<double> ns;
    for (int k = 2; k <= 16; k += 2) ns.push_back(std::pow(10.0, k));
    const auto ratios = hn_trend(prof, ns);
    std::vector<double> dev;
    for (double r : ratios) dev.push_back(r - 1.0);
    LemmaCheck c{"hn_trend", CheckStatus::fail, "|h_n/(mu log n) - 1| non-increasing over n = 1e2..1e16", {}};
    c.values["ratio_first"] = ratios.front();
    c.values["ratio_final"] = ratios.back();
    if (detail::non_increasing_abs(dev)) c.status = CheckStatus::pass;
    suite.checks.push_back(std::move(c));
  }
  {
    const auto est = estimate_rv_index(d, grid, 2.0);
    LemmaCheck c{"rv_index", CheckStatus::fail, "median-of-slopes index estimate within 0.1 of mu", {}};
    c.values["mu_hat"] = est.mu_hat;
    if (!est.mda_violation && std::abs(est.mu_hat - prof.mu) <= 0.1) c.status = CheckStatus::pass;
    suite.checks.push_back(std::move(c));
  }
  return suite;
}

}  // namespace ncmd

#endif  // NCMD_RVTOOLKIT_HPP
