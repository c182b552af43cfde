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

#ifndef NCMD_MONTECARLO_HPP
#define NCMD_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ncmd/families.hpp"
#include "ncmd/logprob.hpp"
#include "ncmd/rng.hpp"

namespace ncmd {

struct McEstimate {
  double log_p_hat = -kInf;
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  /// Delta-method standard error of log_p_hat, sqrt((1 - p) / hits).
  double stderr_log = kInf;
  std::uint64_t seed = 0;
  bool zero_hits = false;
  /// Set when hits is 0 or equals trials, where stderr_log carries no information.
  bool stderr_degenerate = false;
  /// One-sided 95% Clopper-Pearson upper bound on p for zero hits.
  double cp_upper = kNaN;

  [[nodiscard]] double p_hat() const { return static_cast<double>(hits) / static_cast<double>(trials); }
  /// Standard error of p_hat under the binomial model.
  [[nodiscard]] double stderr_p() const {
    const double p = p_hat();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
};

inline McEstimate make_estimate(std::int64_t hits, std::int64_t trials, std::uint64_t seed) {
  McEstimate e;
  e.hits = hits;
  e.trials = trials;
  e.seed = seed;
  e.zero_hits = hits == 0;
  e.stderr_degenerate = hits == 0 || hits == trials;
  if (hits == 0) {
    e.log_p_hat = -kInf;
    e.stderr_log = kInf;
    e.cp_upper = -std::expm1(std::log(0.05) / static_cast<double>(trials));
  } else {
    const double p = e.p_hat();
    e.log_p_hat = std::log(p);
    e.stderr_log = std::sqrt((1.0 - p) / static_cast<double>(hits));
  }
  return e;
}

/**
 * Counts tail events C_n >= x (upper) or C_n <= x (lower) over `trials`
 * draws. Trial i uses CounterStream(seed, i), so the result does not depend
 * on `workers`.
 */
inline McEstimate mc_log_tail(const Family& fam, std::int64_t n, double x, Side side, std::int64_t trials,
                              std::uint64_t seed, unsigned workers = 1) {
  if (trials < 1) throw std::invalid_argument("mc_log_tail: trials must be >= 1");
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::int64_t>(trials, 1024)));
  auto count = [&](std::int64_t begin, std::int64_t end) {
    std::int64_t hits = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      CounterStream rng(seed, static_cast<std::uint64_t>(i));
      if (fam.sample_tail_event(n, x, side, rng)) ++hits;
    }
    return hits;
  };
  if (workers == 1) return make_estimate(count(0, trials), trials, seed);

  std::vector<std::int64_t> partial(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::int64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::int64_t begin = std::min<std::int64_t>(trials, w * chunk);
    const std::int64_t end = std::min<std::int64_t>(trials, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        partial[w] = count(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::int64_t hits = 0;
  for (auto h : partial) hits += h;
  return make_estimate(hits, trials, seed);
}

}  // namespace ncmd

#endif  // NCMD_MONTECARLO_HPP
