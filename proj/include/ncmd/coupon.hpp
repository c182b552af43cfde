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

#ifndef NCMD_COUPON_HPP
#define NCMD_COUPON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncmd {

/// Raised when an exact engine would exceed its work budget.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an alternating sum would lose too many digits to cancellation.
class CancellationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kCouponDpCellLimit = 1e9;

namespace detail {

inline void coupon_guard(std::int64_t n, std::int64_t m) {
  if (static_cast<double>(n) * static_cast<double>(m) > kCouponDpCellLimit) {
    throw ResourceLimitError("coupon DP with n = " + std::to_string(n) + ", m = " + std::to_string(m) +
                             " exceeds the 1e9-cell budget");
  }
}

/**
 * Runs the geometric-convolution recurrence for T_n = X_1 + ... + X_n, with
 * X_k ~ Geom(p_k), p_k = 1 - (k-1)/n, on a cumulative table.
 *
 * The pmf recurrence P(S_k = j) = (1-p_k) P(S_k = j-1) + p_k P(S_{k-1} = j-1)
 * is linear and shift-invariant, so the same recurrence holds for the
 * cumulative sums of either tail. Running it on P(S_k <= j) or on
 * P(S_k >= j) keeps every term non-negative and avoids forming 1 - cdf.
 *
 * `upper == false`: table[j] = P(T_n <= j), with P(S_0 <= j) = 1 for j >= 0.
 * `upper == true`:  table[j] = P(T_n >= j), with P(S_k >= j) = 1 for j <= k.
 */
inline std::vector<double> coupon_tail_table(std::int64_t n, std::int64_t m_max, bool upper) {
  if (n < 1) throw std::invalid_argument("coupon: n must be >= 1");
  if (m_max < 0) throw std::invalid_argument("coupon: m must be >= 0");
  coupon_guard(n, m_max);
  const auto len = static_cast<std::size_t>(m_max + 1);
  std::vector<double> t(len);
  if (upper) {
    t.assign(len, 0.0);
    t[0] = 1.0;  // S_0 = 0
  } else {
    t.assign(len, 1.0);
  }
  const double nd = static_cast<double>(n);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double p = 1.0 - static_cast<double>(k - 1) / nd;
    const double q = 1.0 - p;
    // prev_old holds the (k-1)-row value at j-1 before it is overwritten.
    double prev_old = t[0];
    if (upper) {
      const auto lim = static_cast<std::size_t>(std::min(k, m_max));
      for (std::size_t j = 0; j <= lim; ++j) {
        prev_old = t[j];
        t[j] = 1.0;
      }
      for (std::size_t j = lim + 1; j < len; ++j) {
        const double old = t[j];
        t[j] = q * t[j - 1] + p * prev_old;
        prev_old = old;
      }
    } else {
      t[0] = 0.0;
      for (std::size_t j = 1; j < len; ++j) {
        const double old = t[j];
        t[j] = q * t[j - 1] + p * prev_old;
        prev_old = old;
      }
    }
  }
  return t;
}

}  // namespace detail

/// Exact P(T_n <= m).
inline double coupon_cdf_dp(std::int64_t n, std::int64_t m) {
  if (n < 1) throw std::invalid_argument("coupon: n must be >= 1");
  detail::coupon_guard(n, m);
  if (m < n) return 0.0;
  return detail::coupon_tail_table(n, m, false)[static_cast<std::size_t>(m)];
}

/// Exact P(T_n >= m), accumulated directly from the upper tail.
inline double coupon_upper_dp(std::int64_t n, std::int64_t m) {
  if (n < 1) throw std::invalid_argument("coupon: n must be >= 1");
  detail::coupon_guard(n, m);
  if (m <= n) return 1.0;
  return detail::coupon_tail_table(n, m, true)[static_cast<std::size_t>(m)];
}

/// P(T_n <= j) for j = 0..m_max in one pass.
inline std::vector<double> coupon_cdf_table(std::int64_t n, std::int64_t m_max) {
  return detail::coupon_tail_table(n, m_max, false);
}

/// P(T_n >= j) for j = 0..m_max in one pass.
inline std::vector<double> coupon_upper_table(std::int64_t n, std::int64_t m_max) {
  return detail::coupon_tail_table(n, m_max, true);
}

inline constexpr double kInclusionExclusionCancellationLimit = 1e12;

/**
 * P(T_n <= m) = sum_k (-1)^k C(n,k) (1 - k/n)^m, Neumaier-compensated in
 * long double. Refuses when sum|terms| / |result| exceeds 1e12.
 */
inline double coupon_cdf_inclusion_exclusion(std::int64_t n, std::int64_t m) {
  if (n < 1) throw std::invalid_argument("coupon: n must be >= 1");
  if (m < n) throw std::invalid_argument("coupon_cdf_inclusion_exclusion: needs m >= n");
  const long double nd = static_cast<long double>(n);
  long double log_binom = 0.0L;
  long double sum = 0.0L;
  long double comp = 0.0L;
  long double abs_sum = 0.0L;
  for (std::int64_t k = 0; k <= n; ++k) {
    if (k > 0) log_binom += std::log(static_cast<long double>(n - k + 1)) - std::log(static_cast<long double>(k));
    long double term = 0.0L;
    if (k < n) term = std::exp(log_binom + static_cast<long double>(m) * std::log1p(-static_cast<long double>(k) / nd));
    if (k % 2 == 1) term = -term;
    abs_sum += std::abs(term);
    const long double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  const long double result = sum + comp;
  if (!(result > 0.0L) || abs_sum / result > static_cast<long double>(kInclusionExclusionCancellationLimit)) {
    throw CancellationError("inclusion-exclusion for n = " + std::to_string(n) + ", m = " + std::to_string(m) +
                            " would cancel more than 12 digits");
  }
  return static_cast<double>(std::min(result, 1.0L));
}

struct CouponBounds {
  /// n^(1-c), bounding P(T_n > c n log n).
  double upper_tail_bound = 0.0;
  /// 2 (1 - exp(-m/n))^n, bounding P(T_n <= m).
  double lower_tail_bound = 0.0;
};

/// The two tail bounds used for the coupon collector: the first for the
/// upper tail at c n log n (c > 1), the second for the lower tail at m.
inline CouponBounds coupon_paper_bounds(std::int64_t n, double c, std::int64_t m) {
  if (n < 2) throw std::invalid_argument("coupon_paper_bounds: n must be >= 2");
  const double nd = static_cast<double>(n);
  CouponBounds b;
  b.upper_tail_bound = std::pow(nd, 1.0 - c);
  b.lower_tail_bound = 2.0 * std::pow(-std::expm1(-static_cast<double>(m) / nd), nd);
  return b;
}

}  // namespace ncmd

#endif  // NCMD_COUPON_HPP
