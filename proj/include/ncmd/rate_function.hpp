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

#ifndef NCMD_RATE_FUNCTION_HPP
#define NCMD_RATE_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncmd/logprob.hpp"

namespace ncmd {

/**
 * Extended-real valued rate function x -> [0, +inf] with its one-sided
 * derivatives at the origin.
 */
class RateFunction {
public:
  RateFunction(std::function<double(double)> eval, std::string domain_note, double right_slope_at_zero,
               double left_slope_at_zero)
      : eval_(std::make_shared<const std::function<double(double)>>(std::move(eval))),
        domain_note_(std::move(domain_note)),
        right_slope_(right_slope_at_zero),
        left_slope_(left_slope_at_zero) {}

  double operator()(double x) const { return (*eval_)(x); }

  [[nodiscard]] const std::string& domain_note() const { return domain_note_; }
  /// d/dx at 0+; +inf when the function is infinite to the right of 0.
  [[nodiscard]] double right_slope_at_zero() const { return right_slope_; }
  /// d/dx at 0-; -inf when the function is infinite to the left of 0.
  [[nodiscard]] double left_slope_at_zero() const { return left_slope_; }

  /// Same function with analytically known slopes at zero.
  [[nodiscard]] RateFunction with_slopes(double right, double left) const {
    RateFunction out = *this;
    out.right_slope_ = right;
    out.left_slope_ = left;
    return out;
  }

private:
  std::shared_ptr<const std::function<double(double)>> eval_;
  std::string domain_note_;
  double right_slope_;
  double left_slope_;
};

/// x -> J(x + c), as obtained from the contraction principle under y -> y - c.
/// The slopes at zero are those of J at c, recomputed by one-sided differences
/// when c != 0.
inline RateFunction shift_rate(const RateFunction& rate, double c) {
  if (c == 0.0) return rate;
  auto eval = [rate, c](double x) { return rate(x + c); };
  constexpr double h = 1e-7;
  const double at = rate(c);
  auto slope = [&](double dir) -> double {
    const double v = rate(c + dir * h);
    if (!std::isfinite(v)) return dir * kInf;
    return (v - at) / (dir * h);
  };
  return RateFunction(eval, rate.domain_note() + " (shifted by " + std::to_string(c) + ")", slope(1.0),
                      slope(-1.0));
}

struct RateShapeCheck {
  bool zero_at_origin = false;
  bool positive_off_origin = false;
  bool monotone_left = false;
  bool monotone_right = false;
  [[nodiscard]] bool ok() const { return zero_at_origin && positive_off_origin && monotone_left && monotone_right; }
};

/// Checks unique zero at 0 and one-sided monotonicity (non-increasing on the
/// negative half, non-decreasing on the positive half) over a grid.
inline RateShapeCheck check_rate_shape(const RateFunction& rate, std::span<const double> grid) {
  RateShapeCheck out;
  out.zero_at_origin = rate(0.0) == 0.0;
  out.positive_off_origin = true;
  out.monotone_left = true;
  out.monotone_right = true;
  double prev_right = 0.0;
  double prev_left = 0.0;
  double prev_x_right = 0.0;
  double prev_x_left = 0.0;
  std::vector<double> xs(grid.begin(), grid.end());
  std::sort(xs.begin(), xs.end());
  for (double x : xs) {
    if (x == 0.0) continue;
    const double v = rate(x);
    if (!(v > 0.0)) out.positive_off_origin = false;
    if (x > 0.0) {
      if (x > prev_x_right && v < prev_right) out.monotone_right = false;
      prev_right = v;
      prev_x_right = x;
    }
  }
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const double x = *it;
    if (x >= 0.0) continue;
    const double v = rate(x);
    if (x < prev_x_left && v < prev_left) out.monotone_left = false;
    prev_left = v;
    prev_x_left = x;
  }
  return out;
}

}  // namespace ncmd

#endif  // NCMD_RATE_FUNCTION_HPP
