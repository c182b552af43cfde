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

#ifndef NCMD_FAMILIES_HPP
#define NCMD_FAMILIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncmd/coupon.hpp"
#include "ncmd/distributions.hpp"
#include "ncmd/format.hpp"
#include "ncmd/logprob.hpp"
#include "ncmd/rate_function.hpp"
#include "ncmd/rng.hpp"
#include "ncmd/rvtoolkit.hpp"

namespace ncmd {

enum class FamilyKind { classical_sums, minima, gumbel_maxima, coupon, replacement };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::classical_sums: return "classical_sums";
    case FamilyKind::minima: return "minima";
    case FamilyKind::gumbel_maxima: return "gumbel_maxima";
    case FamilyKind::coupon: return "coupon";
    case FamilyKind::replacement: return "replacement";
  }
  return "?";
}

enum class Side { upper, lower };

/// Sample mean of n i.i.d. N(0, sigma^2).
struct ClassicalParams {
  double sigma = 1.0;
};

/// C_n = min(X_1..X_n) for nonnegative X with F(0) = 0 and F'(0+) in (0, inf).
struct MinimaParams {
  Distribution dist;
  double fprime0 = kNaN;
};

/// C_n = M_n / m_n - 1 for a law in the Gumbel MDA.
struct GumbelParams {
  GumbelMdaProfile profile;
  /// Least n >= 2 with m_n > 0.
  std::int64_t n0 = 2;
};

/// C_n = T_n / (n log n) - 1 for the coupon collector time T_n.
struct CouponParams {};

/// C_n = Z_n - t for the spliced replacement lifetime
///   P(Z_n <= z) = beta (F(z)/F(t))^n on [0, t],
///                 1 - (1 - beta) ((1 - G(z))/(1 - G(t)))^n on (t, inf).
struct ReplacementParams {
  Distribution F;
  Distribution G;
  double t = 1.0;
  double beta = 0.5;
  double Fp_tminus = kNaN;
  double Gp_tplus = kNaN;
};

using FamilyParams = std::variant<ClassicalParams, MinimaParams, GumbelParams, CouponParams, ReplacementParams>;

namespace detail {

inline double centered_difference(const Distribution& d, double x) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
}

inline void validate_replacement(const ReplacementParams& p) {
  auto nonneg = [](const Distribution& d, const char* which) {
    if (d.lower() != 0.0) {
      throw std::invalid_argument(std::string("replacement: ") + which + " must be supported on [0, inf)");
    }
  };
  nonneg(p.F, "F");
  nonneg(p.G, "G");
  if (!(p.t > 0.0) || !std::isfinite(p.t)) throw std::invalid_argument("replacement: t must be positive");
  if (!(p.beta > 0.0 && p.beta < 1.0)) throw std::invalid_argument("replacement: beta must lie in (0, 1)");
  const double Ft = p.F.cdf(p.t);
  const double Gt = p.G.cdf(p.t);
  if (!(Ft > 0.0 && Ft < 1.0)) throw std::invalid_argument("replacement: F(t) must lie in (0, 1)");
  if (!(Gt > 0.0 && Gt < 1.0)) throw std::invalid_argument("replacement: G(t) must lie in (0, 1)");
  auto check_derivative = [&](double declared, const Distribution& d, const char* which) {
    if (!(declared > 0.0) || !std::isfinite(declared)) {
      throw std::invalid_argument(std::string("replacement: ") + which + " must be a positive number");
    }
    const double fd = centered_difference(d, p.t);
    if (std::abs(fd - declared) > 1e-6 * std::abs(declared)) {
      throw std::invalid_argument(std::string("replacement: ") + which + " = " + format_double(declared) +
                                  " disagrees with the finite difference " + format_double(fd));
    }
  };
  check_derivative(p.Fp_tminus, p.F, "F'(t-)");
  check_derivative(p.Gp_tplus, p.G, "G'(t+)");
}

/// Thread-safe memo of m_n for one law; copies share the table.
class LevelCache {
public:
  explicit LevelCache(Distribution d) : dist_(std::move(d)), state_(std::make_shared<State>()) {}

  double level(std::int64_t n) const {
    {
      std::lock_guard lock(state_->mu);
      if (auto it = state_->table.find(n); it != state_->table.end()) return it->second;
    }
    const double m = characteristic_level(dist_, static_cast<double>(n));
    std::lock_guard lock(state_->mu);
    state_->table.emplace(n, m);
    return m;
  }

private:
  struct State {
    std::mutex mu;
    std::map<std::int64_t, double> table;
  };
  Distribution dist_;
  std::shared_ptr<State> state_;
};

/// Threshold on T_n equivalent to C_n >= x (upper) or C_n <= x (lower).
inline double coupon_scaled_threshold(std::int64_t n, double x) {
  const double nd = static_cast<double>(n);
  return (x + 1.0) * nd * std::log(nd);
}

}  // namespace detail

inline ReplacementParams make_replacement_params(Distribution F, Distribution G, double t, double beta) {
  ReplacementParams p{F, G, t, beta, F.pdf(t), G.pdf(t)};
  detail::validate_replacement(p);
  return p;
}

/**
 * One scaled sequence C_n: its speed v_n, large- and moderate-deviation rate
 * functions, weak limit, exact tail evaluators for the unscaled C_n, and a
 * sampler. Immutable; exact evaluators are pure and thread-safe.
 */
class Family {
public:
  [[nodiscard]] FamilyKind kind() const { return kind_; }
  [[nodiscard]] std::string name() const { return to_string(kind_); }
  [[nodiscard]] const FamilyParams& params() const { return params_; }

  /// Canonical specifier string, e.g. "minima:exponential:1".
  [[nodiscard]] std::string spec() const {
    switch (kind_) {
      case FamilyKind::classical_sums: return "classical:sigma=" + format_double(classical().sigma);
      case FamilyKind::minima: return "minima:" + minima().dist.spec();
      case FamilyKind::gumbel_maxima: return "gumbel_maxima:" + gumbel().profile.dist.spec();
      case FamilyKind::coupon: return "coupon";
      case FamilyKind::replacement: {
        const auto& r = replacement();
        return "replacement:" + r.F.spec() + "," + r.G.spec() + ",t=" + format_double(r.t) +
               ",beta=" + format_double(r.beta);
      }
    }
    return {};
  }

  [[nodiscard]] std::int64_t min_n() const {
    switch (kind_) {
      case FamilyKind::gumbel_maxima: return gumbel().n0;
      case FamilyKind::coupon: return 2;
      default: return 1;
    }
  }

  /// v_n: n for classical_sums, minima and replacement; h_n for gumbel_maxima;
  /// log n for coupon.
  [[nodiscard]] double speed(std::int64_t n) const {
    require_n(n);
    const double nd = static_cast<double>(n);
    switch (kind_) {
      case FamilyKind::gumbel_maxima: return normalizing_rate(gumbel().profile.dist, nd);
      case FamilyKind::coupon: return std::log(nd);
      default: return nd;
    }
  }

  /// Factor k_n with k_n C_n -> limit law (v_n, or sqrt(v_n) for classical sums).
  [[nodiscard]] double weak_scale(std::int64_t n) const {
    const double v = speed(n);
    return kind_ == FamilyKind::classical_sums ? std::sqrt(v) : v;
  }

  /// Factor of the moderate-deviation variable: a_n v_n C_n, or
  /// sqrt(a_n v_n) C_n for classical sums.
  [[nodiscard]] double md_scale(std::int64_t n, double a_n) const {
    const double av = a_n * speed(n);
    return kind_ == FamilyKind::classical_sums ? std::sqrt(av) : av;
  }

  [[nodiscard]] const RateFunction& rate_ld() const { return *rate_ld_; }
  [[nodiscard]] const RateFunction& rate_md() const { return *rate_md_; }

  [[nodiscard]] double limit_cdf(double x) const {
    switch (kind_) {
      case FamilyKind::classical_sums: return dist::StdNormal{}.cdf(x / classical().sigma);
      case FamilyKind::minima: return x <= 0.0 ? 0.0 : -std::expm1(-minima().fprime0 * x);
      case FamilyKind::gumbel_maxima:
      case FamilyKind::coupon: return std::exp(-std::exp(-x));
      case FamilyKind::replacement: {
        const auto& r = replacement();
        if (x <= 0.0) return r.beta * std::exp(r.Fp_tminus / r.F.cdf(r.t) * x);
        return 1.0 - (1.0 - r.beta) * std::exp(-r.Gp_tplus / r.G.sf(r.t) * x);
      }
    }
    return kNaN;
  }

  /// log P(C_n >= x).
  [[nodiscard]] double exact_log_upper_tail(std::int64_t n, double x) const {
    require_n(n);
    const double nd = static_cast<double>(n);
    switch (kind_) {
      case FamilyKind::classical_sums:
        return dist::StdNormal{}.log_sf(x * std::sqrt(nd) / classical().sigma);
      case FamilyKind::minima: {
        if (x <= 0.0) return 0.0;
        const double ls = minima().dist.log_sf(x);
        return ls == -kInf ? -kInf : nd * ls;
      }
      case FamilyKind::gumbel_maxima: {
        const auto& d = gumbel().profile.dist;
        const double y = levels_->level(n) * (1.0 + x);
        if (y <= d.lower()) return 0.0;
        return log1mexp(nd * d.log_cdf(y));
      }
      case FamilyKind::coupon: {
        const double thr = std::ceil(detail::coupon_scaled_threshold(n, x));
        if (thr <= nd) return 0.0;
        return std::log(coupon_upper_dp(n, checked_threshold(n, thr)));
      }
      case FamilyKind::replacement: {
        const auto& r = replacement();
        if (x > 0.0) return std::log1p(-r.beta) + nd * (r.G.log_sf(x + r.t) - r.G.log_sf(r.t));
        if (x + r.t <= 0.0) return 0.0;
        return log1mexp(std::log(r.beta) + nd * (r.F.log_cdf(x + r.t) - r.F.log_cdf(r.t)));
      }
    }
    return kNaN;
  }

  /// log P(C_n <= x).
  [[nodiscard]] double exact_log_lower_tail(std::int64_t n, double x) const {
    require_n(n);
    const double nd = static_cast<double>(n);
    switch (kind_) {
      case FamilyKind::classical_sums:
        return dist::StdNormal{}.log_cdf(x * std::sqrt(nd) / classical().sigma);
      case FamilyKind::minima: {
        if (x < 0.0) return -kInf;
        const double ls = minima().dist.log_sf(x);
        return ls == -kInf ? 0.0 : log1mexp(nd * ls);
      }
      case FamilyKind::gumbel_maxima: {
        const auto& d = gumbel().profile.dist;
        const double y = levels_->level(n) * (1.0 + x);
        return nd * d.log_cdf(y);
      }
      case FamilyKind::coupon: {
        const double thr = std::floor(detail::coupon_scaled_threshold(n, x));
        if (thr < nd) return -kInf;
        return std::log(coupon_cdf_dp(n, checked_threshold(n, thr)));
      }
      case FamilyKind::replacement: {
        const auto& r = replacement();
        if (x <= 0.0) {
          if (x + r.t <= 0.0) return -kInf;
          return std::log(r.beta) + nd * (r.F.log_cdf(x + r.t) - r.F.log_cdf(r.t));
        }
        return log1mexp(std::log1p(-r.beta) + nd * (r.G.log_sf(x + r.t) - r.G.log_sf(r.t)));
      }
    }
    return kNaN;
  }

  /// Batched tails at one n. The coupon family runs a single DP up to the
  /// largest threshold; other families evaluate point by point.
  [[nodiscard]] std::vector<double> exact_log_tails(std::int64_t n, std::span<const double> xs, Side side) const {
    std::vector<double> out;
    out.reserve(xs.size());
    if (kind_ != FamilyKind::coupon) {
      for (double x : xs) out.push_back(side == Side::upper ? exact_log_upper_tail(n, x) : exact_log_lower_tail(n, x));
      return out;
    }
    require_n(n);
    const double nd = static_cast<double>(n);
    std::vector<double> thr;
    double hi = 0.0;
    for (double x : xs) {
      const double raw = detail::coupon_scaled_threshold(n, x);
      thr.push_back(side == Side::upper ? std::ceil(raw) : std::floor(raw));
      hi = std::max(hi, thr.back());
    }
    std::vector<double> table;
    if ((side == Side::upper && hi > nd) || (side == Side::lower && hi >= nd)) {
      const auto m = checked_threshold(n, hi);
      table = side == Side::upper ? coupon_upper_table(n, m) : coupon_cdf_table(n, m);
    }
    for (double t : thr) {
      if (side == Side::upper) {
        out.push_back(t <= nd ? 0.0 : std::log(table[static_cast<std::size_t>(t)]));
      } else {
        out.push_back(t < nd ? -kInf : std::log(table[static_cast<std::size_t>(t)]));
      }
    }
    return out;
  }

  /// One realization of C_n.
  [[nodiscard]] double sample(std::int64_t n, CounterStream& rng) const {
    require_n(n);
    const double nd = static_cast<double>(n);
    switch (kind_) {
      case FamilyKind::classical_sums:
        return classical().sigma / std::sqrt(nd) * dist::StdNormal{}.quantile(rng.uniform());
      case FamilyKind::minima: {
        // P(min <= y) = 1 - sf(y)^n, inverted at the stream's uniform.
        const auto& d = minima().dist;
        const double lq = std::log1p(-rng.uniform()) / nd;
        return lq == 0.0 ? d.lower() : d.inverse_log_sf(lq);
      }
      case FamilyKind::gumbel_maxima: {
        // P(max <= y) = F(y)^n.
        const auto& d = gumbel().profile.dist;
        const double lq = log1mexp(std::log(rng.uniform()) / nd);
        return d.inverse_log_sf(lq) / levels_->level(n) - 1.0;
      }
      case FamilyKind::coupon:
        return static_cast<double>(sample_coupon_time(n, rng)) / (nd * std::log(nd)) - 1.0;
      case FamilyKind::replacement: {
        const auto& r = replacement();
        const double u = rng.uniform();
        double z = 0.0;
        if (u <= r.beta) {
          const double lp = r.F.log_cdf(r.t) + std::log(u / r.beta) / nd;
          z = r.F.quantile(std::exp(lp));
        } else {
          const double lq = r.G.log_sf(r.t) + std::log((1.0 - u) / (1.0 - r.beta)) / nd;
          z = r.G.inverse_log_sf(lq);
        }
        return z - r.t;
      }
    }
    return kNaN;
  }

  /// Draws C_n and reports whether it lands in the tail event. The coupon
  /// family compares T_n against the integer threshold used by the exact
  /// evaluator so both sides count the same event.
  [[nodiscard]] bool sample_tail_event(std::int64_t n, double x, Side side, CounterStream& rng) const {
    if (kind_ == FamilyKind::coupon) {
      require_n(n);
      const auto t = static_cast<double>(sample_coupon_time(n, rng));
      const double raw = detail::coupon_scaled_threshold(n, x);
      return side == Side::upper ? t >= std::ceil(raw) : t <= std::floor(raw);
    }
    const double c = sample(n, rng);
    return side == Side::upper ? c >= x : c <= x;
  }

  const ClassicalParams& classical() const { return std::get<ClassicalParams>(params_); }
  const MinimaParams& minima() const { return std::get<MinimaParams>(params_); }
  const GumbelParams& gumbel() const { return std::get<GumbelParams>(params_); }
  const ReplacementParams& replacement() const { return std::get<ReplacementParams>(params_); }

  friend Family make_family(FamilyParams params);

private:
  Family(FamilyKind kind, FamilyParams params, RateFunction ld, RateFunction md,
         std::shared_ptr<const detail::LevelCache> levels)
      : kind_(kind),
        params_(std::move(params)),
        rate_ld_(std::make_shared<const RateFunction>(std::move(ld))),
        rate_md_(std::make_shared<const RateFunction>(std::move(md))),
        levels_(std::move(levels)) {}

  void require_n(std::int64_t n) const {
    if (n < min_n()) {
      throw std::domain_error(name() + ": n = " + std::to_string(n) + " is below the minimum " +
                              std::to_string(min_n()));
    }
  }

  static std::int64_t checked_threshold(std::int64_t n, double thr) {
    if (!(thr < 9.0e15) || static_cast<double>(n) * thr > kCouponDpCellLimit) {
      throw ResourceLimitError("coupon DP with n = " + std::to_string(n) + ", m = " + format_double(thr) +
                               " exceeds the 1e9-cell budget");
    }
    return static_cast<std::int64_t>(thr);
  }

  static std::int64_t sample_coupon_time(std::int64_t n, CounterStream& rng) {
    std::int64_t total = 1;  // k = 1 has p = 1
    const double nd = static_cast<double>(n);
    for (std::int64_t k = 2; k <= n; ++k) {
      const double q = static_cast<double>(k - 1) / nd;
      total += static_cast<std::int64_t>(std::ceil(std::log(rng.uniform()) / std::log(q)));
    }
    return total;
  }

  FamilyKind kind_;
  FamilyParams params_;
  std::shared_ptr<const RateFunction> rate_ld_;
  std::shared_ptr<const RateFunction> rate_md_;
  std::shared_ptr<const detail::LevelCache> levels_;
};

inline Family make_family(FamilyParams params) {
  return std::visit(
      [&](auto& p) -> Family {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClassicalParams>) {
          if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw std::invalid_argument("classical: sigma must be positive");
          const double s2 = p.sigma * p.sigma;
          RateFunction quad([s2](double x) { return x * x / (2.0 * s2); }, "x^2 / (2 sigma^2) on R", 0.0, 0.0);
          return Family(FamilyKind::classical_sums, p, quad, quad, nullptr);
        } else if constexpr (std::is_same_v<T, MinimaParams>) {
          const auto& d = p.dist;
          if (d.lower() != 0.0 || d.cdf(0.0) != 0.0) {
            throw std::invalid_argument("minima: '" + d.spec() + "' must be nonnegative with F(0) = 0");
          }
          if (std::isnan(p.fprime0)) p.fprime0 = d.right_derivative_at_lower();
          if (!(p.fprime0 > 0.0) || !std::isfinite(p.fprime0)) {
            throw std::invalid_argument("minima: F'(0+) of '" + d.spec() + "' is " + format_double(p.fprime0) +
                                        "; it must lie in (0, inf)");
          }
          const double omega = d.upper();
          const double fp = p.fprime0;
          RateFunction ld(
              [d, omega](double x) { return (x < 0.0 || x >= omega) ? kInf : -d.log_sf(x); },
              "-log(1 - F(x)) on [0, omega_F), inf otherwise", fp, -kInf);
          RateFunction md([fp](double x) { return x < 0.0 ? kInf : fp * x; }, "F'(0+) x on [0, inf)", fp, -kInf);
          return Family(FamilyKind::minima, p, ld, md, nullptr);
        } else if constexpr (std::is_same_v<T, GumbelParams>) {
          const double mu = p.profile.mu;
          if (!(mu > 0.0)) throw MdaViolation("gumbel_maxima: mu must be positive");
          auto levels = std::make_shared<const detail::LevelCache>(p.profile.dist);
          p.n0 = 2;
          while (levels->level(p.n0) <= 0.0) {
            if (++p.n0 > 1000000) throw std::invalid_argument("gumbel_maxima: m_n stays non-positive");
          }
          RateFunction J([mu](double y) { return y < 1.0 ? kInf : (std::pow(y, mu) - 1.0) / mu; },
                         "(y^mu - 1)/mu on [1, inf)", kInf, -kInf);
          RateFunction ld = shift_rate(J, 1.0).with_slopes(1.0, -kInf);
          RateFunction md([](double x) { return x < 0.0 ? kInf : x; }, "x on [0, inf)", 1.0, -kInf);
          return Family(FamilyKind::gumbel_maxima, p, ld, md, levels);
        } else if constexpr (std::is_same_v<T, CouponParams>) {
          RateFunction J([](double y) { return y < 1.0 ? kInf : y - 1.0; }, "y - 1 on [1, inf)", kInf, -kInf);
          RateFunction ld = shift_rate(J, 1.0).with_slopes(1.0, -kInf);
          RateFunction md([](double x) { return x < 0.0 ? kInf : x; }, "x on [0, inf)", 1.0, -kInf);
          return Family(FamilyKind::coupon, p, ld, md, nullptr);
        } else {
          detail::validate_replacement(p);
          const auto F = p.F;
          const auto G = p.G;
          const double t = p.t;
          const double logFt = F.log_cdf(t);
          const double logSGt = G.log_sf(t);
          const double left = p.Fp_tminus / F.cdf(t);
          const double right = p.Gp_tplus / G.sf(t);
          RateFunction ld(
              [F, G, t, logFt, logSGt](double x) {
                if (x <= -t) return kInf;
                if (x <= 0.0) return -(F.log_cdf(x + t) - logFt);
                return -(G.log_sf(x + t) - logSGt);
              },
              "-log(F(x+t)/F(t)) on (-t, 0], -log((1-G(x+t))/(1-G(t))) on (0, inf)", right, -left);
          RateFunction md([left, right](double x) { return x <= 0.0 ? -left * x : right * x; },
                          "-F'(t-)/F(t) x for x <= 0, G'(t+)/(1-G(t)) x for x > 0", right, -left);
          return Family(FamilyKind::replacement, p, ld, md, nullptr);
        }
      },
      params);
}

inline Family make_classical(double sigma = 1.0) { return make_family(ClassicalParams{sigma}); }
inline Family make_minima(const Distribution& d) { return make_family(MinimaParams{d, kNaN}); }
inline Family make_gumbel_maxima(const Distribution& d) { return make_family(GumbelParams{make_profile(d), 2}); }
inline Family make_coupon() { return make_family(CouponParams{}); }
inline Family make_replacement(const Distribution& F, const Distribution& G, double t, double beta) {
  return make_family(make_replacement_params(F, G, t, beta));
}

/**
 * Parses a family specifier:
 *   minima:<dist>   gumbel_maxima:<dist>   coupon
 *   replacement:<F>,<G>,t=<v>,beta=<v>     classical:sigma=<v>
 */
inline Family parse_family(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto head = spec.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_rest = [&]() {
    if (rest.empty()) throw std::invalid_argument("family '" + std::string(head) + "' needs arguments");
  };
  if (head == "coupon") {
    if (!rest.empty()) throw std::invalid_argument("family 'coupon' takes no arguments, got '" + std::string(rest) + "'");
    return make_coupon();
  }
  if (head == "minima") {
    need_rest();
    return make_minima(parse_distribution(rest));
  }
  if (head == "gumbel_maxima") {
    need_rest();
    return make_gumbel_maxima(parse_distribution(rest));
  }
  if (head == "classical" || head == "classical_sums") {
    double sigma = 1.0;
    if (!rest.empty()) {
      if (rest.substr(0, 6) != "sigma=") throw std::invalid_argument("bad classical argument '" + std::string(rest) + "'");
      auto v = parse_double(rest.substr(6));
      if (!v) throw std::invalid_argument("bad sigma value '" + std::string(rest.substr(6)) + "'");
      sigma = *v;
    }
    return make_classical(sigma);
  }
  if (head == "replacement") {
    need_rest();
    std::vector<std::string_view> dists;
    std::optional<double> t, beta, fp, gp;
    for (auto tok : split(rest, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos) {
        dists.push_back(tok);
        continue;
      }
      const auto key = tok.substr(0, eq);
      const auto v = parse_double(tok.substr(eq + 1));
      if (!v) throw std::invalid_argument("bad value in '" + std::string(tok) + "'");
      if (key == "t") {
        t = v;
      } else if (key == "beta") {
        beta = v;
      } else if (key == "fp") {
        fp = v;
      } else if (key == "gp") {
        gp = v;
      } else {
        throw std::invalid_argument("unknown replacement key '" + std::string(key) + "'");
      }
    }
    if (dists.size() != 2 || !t || !beta) {
      throw std::invalid_argument("replacement needs <F>,<G>,t=<v>,beta=<v>");
    }
    const auto F = parse_distribution(dists[0]);
    const auto G = parse_distribution(dists[1]);
    ReplacementParams p{F, G, *t, *beta, fp.value_or(F.pdf(*t)), gp.value_or(G.pdf(*t))};
    return make_family(p);
  }
  throw std::invalid_argument("unknown family '" + std::string(head) + "'");
}

}  // namespace ncmd

#endif  // NCMD_FAMILIES_HPP
