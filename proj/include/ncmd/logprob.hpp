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

#ifndef NCMD_LOGPROB_HPP
#define NCMD_LOGPROB_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ncmd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;

/**
 * Natural logarithm of a probability, on the extended half-line [-inf, 0].
 */
class LogProb {
public:
  constexpr LogProb() = default;

  explicit LogProb(double value) : value_(value) {
    if (std::isnan(value) || value > 0.0) {
      throw std::domain_error("LogProb: value must lie in [-inf, 0], got " + std::to_string(value));
    }
  }

  static constexpr LogProb certain() { return LogProb(0.0, Unchecked{}); }
  static constexpr LogProb impossible() { return LogProb(-kInf, Unchecked{}); }

  [[nodiscard]] constexpr double value() const { return value_; }
  [[nodiscard]] double prob() const { return std::exp(value_); }
  [[nodiscard]] constexpr bool is_null() const { return value_ == -kInf; }

  friend constexpr bool operator==(LogProb a, LogProb b) = default;

private:
  struct Unchecked {};
  constexpr LogProb(double value, Unchecked) : value_(value) {}

  double value_ = -kInf;
};

/**
 * log(1 - exp(lp)) for lp <= 0.
 *
 * Switches between log(-expm1(lp)) and log1p(-exp(lp)) at lp = -log 2,
 * which keeps the relative error at a few ulps over the whole range.
 */
inline double log1mexp(double lp) {
  if (std::isnan(lp)) return kNaN;
  if (lp > 0.0) {
    throw std::domain_error("log1mexp: argument must be <= 0, got " + std::to_string(lp));
  }
  if (lp == -kInf) return 0.0;
  if (lp > -kLn2) return std::log(-std::expm1(lp));
  return std::log1p(-std::exp(lp));
}

inline LogProb stable_log_complement(LogProb lp) {
  return LogProb(log1mexp(lp.value()));
}

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// log(exp(a) - exp(b)) for b <= a.
inline double log_sub_exp(double a, double b) {
  if (b > a) throw std::domain_error("log_sub_exp: b must not exceed a");
  if (b == -kInf) return a;
  return a + log1mexp(b - a);
}

}  // namespace ncmd

#endif  // NCMD_LOGPROB_HPP
