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

#ifndef NCMD_DISTRIBUTIONS_HPP
#define NCMD_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ncmd/format.hpp"
#include "ncmd/logprob.hpp"

namespace ncmd {

namespace detail {

inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736405617640;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

/// log(1 + e^x) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/**
 * Mills ratio R(x) = sf(x) / pdf(x) of the standard normal for x >= 3, from
 * the continued fraction R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))) evaluated
 * with the modified Lentz method.
 */
inline double normal_mills_ratio_cf(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

inline double normal_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

inline double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

inline double normal_log_sf(double x) {
  if (x == kInf) return -kInf;
  if (x == -kInf) return 0.0;
  if (x < -3.0) return std::log1p(-std::exp(normal_log_sf(-x)));
  if (x < 3.0) return std::log(normal_sf(x));
  return normal_log_pdf(x) + std::log(normal_mills_ratio_cf(x));
}

/**
 * log of the regularized upper incomplete gamma Q(a, x), using the Legendre
 * continued fraction in log form once x > a + 1 so the result stays finite
 * far beyond the underflow point of Q itself.
 */
inline double gamma_log_q(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x == kInf) return -kInf;
  if (x <= a + 1.0) {
    const double p = boost::math::gamma_p(a, x);
    return p < 0.5 ? std::log1p(-p) : std::log(boost::math::gamma_q(a, x));
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

/**
 * Solves g(x) = target for non-decreasing g by exponential bracket expansion
 * from `start`, then bisection until the bracket collapses to adjacent
 * doubles (at most `max_iter` halvings).
 */
inline double bracket_and_bisect(const std::function<double(double)>& g, double target, double start,
                                 double lower, double upper, int max_iter = 200) {
  double lo = start;
  double hi = start;
  double step = std::max(1.0, std::abs(start));
  if (g(start) < target) {
    for (int i = 0; i < 2100; ++i) {
      lo = hi;
      hi = std::min(start + step, upper);
      if (g(hi) >= target || hi == upper) break;
      step *= 2.0;
    }
  } else {
    for (int i = 0; i < 2100; ++i) {
      hi = lo;
      lo = std::max(start - step, lower);
      if (g(lo) < target || lo == lower) break;
      step *= 2.0;
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::domain_error("bracket_and_bisect: could not bracket the target");
  }
  for (int i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == target) return mid;
    if (gm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double glo = g(lo);
  const double ghi = g(hi);
  return std::abs(glo - target) <= std::abs(ghi - target) ? lo : hi;
}

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be a finite positive number");
  }
}

}  // namespace detail

namespace dist {

struct Exponential {
  double rate = 1.0;

  static constexpr std::string_view name = "exponential";
  double lower() const { return 0.0; }
  double upper() const { return kInf; }
  double log_pdf(double x) const { return x < 0.0 ? -kInf : std::log(rate) - rate * x; }
  double log_sf(double x) const { return x <= 0.0 ? 0.0 : -rate * x; }
  double log_cdf(double x) const { return x <= 0.0 ? -kInf : log1mexp(-rate * x); }
  double cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }
  double sf(double x) const { return x <= 0.0 ? 1.0 : std::exp(-rate * x); }
  double quantile(double p) const { return -std::log1p(-p) / rate; }
  double inverse_log_sf(double lq) const { return -lq / rate; }
  double right_derivative_at_lower() const { return rate; }
};

struct Uniform01 {
  static constexpr std::string_view name = "uniform01";
  double lower() const { return 0.0; }
  double upper() const { return 1.0; }
  double log_pdf(double x) const { return (x < 0.0 || x > 1.0) ? -kInf : 0.0; }
  double log_sf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return -kInf;
    return std::log1p(-x);
  }
  double log_cdf(double x) const {
    if (x <= 0.0) return -kInf;
    if (x >= 1.0) return 0.0;
    return std::log(x);
  }
  double cdf(double x) const { return std::clamp(x, 0.0, 1.0); }
  double sf(double x) const { return 1.0 - std::clamp(x, 0.0, 1.0); }
  double quantile(double p) const { return p; }
  double inverse_log_sf(double lq) const { return -std::expm1(lq); }
  double right_derivative_at_lower() const { return 1.0; }
};

struct Weibull {
  double shape = 1.0;

  static constexpr std::string_view name = "weibull";
  double lower() const { return 0.0; }
  double upper() const { return kInf; }
  double log_pdf(double x) const {
    if (x < 0.0) return -kInf;
    if (x == 0.0) return shape < 1.0 ? kInf : (shape == 1.0 ? 0.0 : -kInf);
    return std::log(shape) + (shape - 1.0) * std::log(x) - std::pow(x, shape);
  }
  double log_sf(double x) const { return x <= 0.0 ? 0.0 : -std::pow(x, shape); }
  double log_cdf(double x) const { return x <= 0.0 ? -kInf : log1mexp(-std::pow(x, shape)); }
  double cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, shape)); }
  double sf(double x) const { return x <= 0.0 ? 1.0 : std::exp(-std::pow(x, shape)); }
  double quantile(double p) const { return std::pow(-std::log1p(-p), 1.0 / shape); }
  double inverse_log_sf(double lq) const { return std::pow(-lq, 1.0 / shape); }
  double right_derivative_at_lower() const {
    if (shape == 1.0) return 1.0;
    return shape > 1.0 ? 0.0 : kInf;
  }
};

struct Gamma {
  double shape = 1.0;

  static constexpr std::string_view name = "gamma";
  double lower() const { return 0.0; }
  double upper() const { return kInf; }
  double log_pdf(double x) const {
    if (x < 0.0) return -kInf;
    if (x == 0.0) return shape < 1.0 ? kInf : (shape == 1.0 ? 0.0 : -kInf);
    return (shape - 1.0) * std::log(x) - x - std::lgamma(shape);
  }
  double log_sf(double x) const { return detail::gamma_log_q(shape, x); }
  double log_cdf(double x) const {
    if (x <= 0.0) return -kInf;
    if (x < shape + 1.0) return std::log(boost::math::gamma_p(shape, x));
    return log1mexp(log_sf(x));
  }
  double cdf(double x) const { return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x); }
  double sf(double x) const { return x <= 0.0 ? 1.0 : boost::math::gamma_q(shape, x); }
  double quantile(double p) const {
    return detail::bracket_and_bisect([this](double x) { return cdf(x); }, p, 1.0, 0.0, kInf);
  }
  double inverse_log_sf(double lq) const {
    return detail::bracket_and_bisect([this](double x) { return -log_sf(x); }, -lq, 1.0, 0.0, kInf);
  }
  double right_derivative_at_lower() const {
    if (shape == 1.0) return 1.0;
    return shape > 1.0 ? 0.0 : kInf;
  }
};

struct StdNormal {
  static constexpr std::string_view name = "std_normal";
  double lower() const { return -kInf; }
  double upper() const { return kInf; }
  double log_pdf(double x) const { return detail::normal_log_pdf(x); }
  double log_sf(double x) const { return detail::normal_log_sf(x); }
  double log_cdf(double x) const { return detail::normal_log_sf(-x); }
  double cdf(double x) const { return detail::normal_sf(-x); }
  double sf(double x) const { return detail::normal_sf(x); }
  double quantile(double p) const { return -detail::kSqrt2 * boost::math::erfc_inv(2.0 * p); }
  double inverse_log_sf(double lq) const {
    if (lq > -kLn2) return quantile(-std::expm1(lq));
    if (lq > -700.0) return detail::kSqrt2 * boost::math::erfc_inv(2.0 * std::exp(lq));
    return detail::bracket_and_bisect([this](double x) { return -log_sf(x); }, -lq,
                                      std::sqrt(-2.0 * lq), -kInf, kInf);
  }
  double right_derivative_at_lower() const { return kNaN; }
};

struct Logistic {
  static constexpr std::string_view name = "logistic";
  double lower() const { return -kInf; }
  double upper() const { return kInf; }
  double log_pdf(double x) const {
    const double ax = std::abs(x);
    return -ax - 2.0 * std::log1p(std::exp(-ax));
  }
  double log_sf(double x) const { return -detail::softplus(x); }
  double log_cdf(double x) const { return -detail::softplus(-x); }
  double cdf(double x) const { return 1.0 / (1.0 + std::exp(-x)); }
  double sf(double x) const { return 1.0 / (1.0 + std::exp(x)); }
  double quantile(double p) const { return std::log(p) - std::log1p(-p); }
  double inverse_log_sf(double lq) const { return log1mexp(lq) - lq; }
  double right_derivative_at_lower() const { return kNaN; }
};

struct LogNormal {
  static constexpr std::string_view name = "lognormal";
  double lower() const { return 0.0; }
  double upper() const { return kInf; }
  double log_pdf(double x) const {
    if (x <= 0.0) return -kInf;
    const double lx = std::log(x);
    return detail::normal_log_pdf(lx) - lx;
  }
  double log_sf(double x) const { return x <= 0.0 ? 0.0 : detail::normal_log_sf(std::log(x)); }
  double log_cdf(double x) const { return x <= 0.0 ? -kInf : detail::normal_log_sf(-std::log(x)); }
  double cdf(double x) const { return x <= 0.0 ? 0.0 : detail::normal_sf(-std::log(x)); }
  double sf(double x) const { return x <= 0.0 ? 1.0 : detail::normal_sf(std::log(x)); }
  double quantile(double p) const { return std::exp(StdNormal{}.quantile(p)); }
  double inverse_log_sf(double lq) const { return std::exp(StdNormal{}.inverse_log_sf(lq)); }
  double right_derivative_at_lower() const { return 0.0; }
};

}  // namespace dist

/**
 * A continuous law from the built-in catalog. Immutable value type; every
 * member function is pure.
 *
 * Tail access is log-domain first: log_sf and log_cdf stay finite well past
 * the point where sf or cdf underflow.
 */
class Distribution {
public:
  using Variant = std::variant<dist::Exponential, dist::Uniform01, dist::Weibull, dist::Gamma,
                               dist::StdNormal, dist::Logistic, dist::LogNormal>;

  explicit Distribution(Variant v) : v_(v) {}

  [[nodiscard]] std::string name() const {
    return std::visit([](const auto& d) { return std::string(d.name); }, v_);
  }

  [[nodiscard]] std::vector<double> params() const {
    return std::visit(
        [](const auto& d) -> std::vector<double> {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, dist::Exponential>) return {d.rate};
          if constexpr (std::is_same_v<T, dist::Weibull> || std::is_same_v<T, dist::Gamma>) {
            return {d.shape};
          }
          return {};
        },
        v_);
  }

  /// Canonical specifier, e.g. "weibull:2".
  [[nodiscard]] std::string spec() const {
    std::string s = name();
    const auto p = params();
    for (std::size_t i = 0; i < p.size(); ++i) s += (i == 0 ? ":" : ",") + format_double(p[i]);
    return s;
  }

  [[nodiscard]] double lower() const { return visit([](const auto& d) { return d.lower(); }); }
  [[nodiscard]] double upper() const { return visit([](const auto& d) { return d.upper(); }); }

  [[nodiscard]] double cdf(double x) const { return visit([x](const auto& d) { return d.cdf(x); }); }
  [[nodiscard]] double sf(double x) const { return visit([x](const auto& d) { return d.sf(x); }); }
  [[nodiscard]] double log_pdf(double x) const { return visit([x](const auto& d) { return d.log_pdf(x); }); }
  [[nodiscard]] double pdf(double x) const { return std::exp(log_pdf(x)); }
  [[nodiscard]] double log_sf(double x) const {
    if (std::isnan(x)) return kNaN;
    if (x < lower()) return 0.0;
    if (x >= upper()) return -kInf;
    return visit([x](const auto& d) { return d.log_sf(x); });
  }
  [[nodiscard]] double log_cdf(double x) const {
    if (std::isnan(x)) return kNaN;
    if (x <= lower()) return lower() == -kInf ? visit([x](const auto& d) { return d.log_cdf(x); }) : -kInf;
    if (x >= upper()) return 0.0;
    return visit([x](const auto& d) { return d.log_cdf(x); });
  }

  /// Inverse cdf on (0, 1).
  [[nodiscard]] double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error("quantile: probability must lie in (0, 1), got " + format_double(p));
    }
    return visit([p](const auto& d) { return d.quantile(p); });
  }

  /// Inverse survival function addressed by log q: the x with log_sf(x) = lq.
  [[nodiscard]] double inverse_log_sf(double lq) const {
    if (!(lq < 0.0) || lq == -kInf) {
      throw std::domain_error("inverse_log_sf: log-probability must lie in (-inf, 0), got " +
                              format_double(lq));
    }
    return visit([lq](const auto& d) { return d.inverse_log_sf(lq); });
  }

  /// lim_{x -> lower+} F(x) / (x - lower) for members with finite lower edge;
  /// NaN when the support is unbounded below.
  [[nodiscard]] double right_derivative_at_lower() const {
    return visit([](const auto& d) { return d.right_derivative_at_lower(); });
  }

  [[nodiscard]] const Variant& variant() const { return v_; }

private:
  template <class F>
  double visit(F&& f) const {
    return std::visit(std::forward<F>(f), v_);
  }

  Variant v_;
};

inline Distribution catalog_get(std::string_view name, std::span<const double> params = {}) {
  auto expect_params = [&](std::size_t n) {
    if (params.size() != n) {
      throw std::invalid_argument("distribution '" + std::string(name) + "' takes " + std::to_string(n) +
                                  " parameter(s), got " + std::to_string(params.size()));
    }
  };
  if (name == "exponential") {
    if (params.empty()) return Distribution(dist::Exponential{1.0});
    expect_params(1);
    detail::require_positive(params[0], "exponential rate");
    return Distribution(dist::Exponential{params[0]});
  }
  if (name == "weibull" || name == "gamma") {
    expect_params(1);
    detail::require_positive(params[0], "shape parameter");
    if (name == "weibull") return Distribution(dist::Weibull{params[0]});
    return Distribution(dist::Gamma{params[0]});
  }
  if (name == "uniform01" || name == "std_normal" || name == "logistic" || name == "lognormal") {
    expect_params(0);
    if (name == "uniform01") return Distribution(dist::Uniform01{});
    if (name == "std_normal") return Distribution(dist::StdNormal{});
    if (name == "logistic") return Distribution(dist::Logistic{});
    return Distribution(dist::LogNormal{});
  }
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

inline Distribution catalog_get(std::string_view name, std::initializer_list<double> params) {
  return catalog_get(name, std::span<const double>(params.begin(), params.size()));
}

/// Parses "name" or "name:p1[,p2...]", e.g. "exponential:1.0" or "weibull:2".
inline Distribution parse_distribution(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    for (auto tok : split(spec.substr(colon + 1), ',')) {
      auto v = parse_double(tok);
      if (!v) throw std::invalid_argument("bad distribution parameter '" + std::string(tok) + "'");
      params.push_back(*v);
    }
  }
  return catalog_get(name, params);
}

}  // namespace ncmd

#endif  // NCMD_DISTRIBUTIONS_HPP
