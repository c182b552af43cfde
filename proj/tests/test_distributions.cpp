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

#include <cmath>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <catch_amalgamated.hpp>

#include "ncmd/ncmd.hpp"

using namespace ncmd;
using Catch::Approx;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

double normal_log_sf_oracle(double x) {
  const mp z = mp(x) / sqrt(mp(2));
  const mp v = x < 0 ? boost::math::log1p(-boost::math::erfc(-z) / 2) : mp(log(boost::math::erfc(z) / 2));
  return static_cast<double>(v);
}

double gamma_log_q_oracle(double a, double x) {
  const mp p = boost::math::gamma_p(mp(a), mp(x));
  const mp v = p < 0.5 ? boost::math::log1p(-p) : mp(log(boost::math::gamma_q(mp(a), mp(x))));
  return static_cast<double>(v);
}

const std::vector<std::string> kCatalog{"exponential:1", "exponential:2.5", "uniform01", "weibull:0.5", "weibull:2",
                                        "weibull:3",     "gamma:1",         "gamma:2.5", "std_normal",  "logistic",
                                        "lognormal"};

}  // namespace

TEST_CASE("normal log_sf against a 50-digit erfc", "[distributions]") {
  const auto d = catalog_get("std_normal");
  for (double x : {-30.0, -8.0, -3.5, -1.0, 0.0, 0.5, 2.9, 3.1, 10.0, 37.5, 100.0, 1000.0}) {
    INFO("x = " << x);
    const double want = normal_log_sf_oracle(x);
    CHECK(d.log_sf(x) == Approx(want).epsilon(1e-13).margin(1e-300));
  }
  CHECK(d.log_sf(-40.0) == 0.0);
  CHECK(d.log_cdf(-37.5) == Approx(normal_log_sf_oracle(37.5)).epsilon(1e-13));
}

TEST_CASE("gamma log_sf against a 50-digit incomplete gamma", "[distributions]") {
  for (double a : {0.5, 1.0, 2.5, 7.0}) {
    const auto d = catalog_get("gamma", {a});
    for (double x : {0.1, 1.0, a + 0.5, 20.0, 200.0, 700.0}) {
      INFO("a = " << a << ", x = " << x);
      CHECK(d.log_sf(x) == Approx(gamma_log_q_oracle(a, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed forms", "[distributions]") {
  const auto e = catalog_get("exponential", {2.0});
  CHECK(e.log_sf(3.0) == -6.0);
  CHECK(e.quantile(0.5) == Approx(std::log(2.0) / 2.0).epsilon(1e-15));
  const auto w = catalog_get("weibull", {2.0});
  CHECK(w.log_sf(3.0) == -9.0);
  CHECK(w.inverse_log_sf(-std::log(1e6)) == Approx(std::sqrt(std::log(1e6))).epsilon(1e-15));
  const auto l = catalog_get("logistic");
  CHECK(l.log_sf(800.0) == Approx(-800.0).epsilon(1e-15));
  CHECK(l.cdf(0.0) == 0.5);
  const auto u = catalog_get("uniform01");
  CHECK(u.log_sf(1.0) == -kInf);
  CHECK(u.log_sf(2.0) == -kInf);
  CHECK(u.log_cdf(-1.0) == -kInf);
  CHECK(u.right_derivative_at_lower() == 1.0);
  CHECK(catalog_get("exponential").spec() == "exponential:1");
}

TEST_CASE("quantile and inverse_log_sf round trips", "[distributions]") {
  for (const auto& s : kCatalog) {
    const auto d = parse_distribution(s);
    INFO(s);
    CHECK(d.spec() == s);
    for (double p : {1e-10, 0.01, 0.3, 0.5, 0.9, 0.999999}) {
      const double x = d.quantile(p);
      CHECK(d.cdf(x) == Approx(p).epsilon(1e-9));
    }
    // A finite right endpoint limits how far log_sf can be resolved in double.
    const double hi = std::isfinite(d.upper()) ? -5.0 : -600.0;
    const double mid = std::isfinite(d.upper()) ? -2.0 : -50.0;
    for (double lq : {-1e-8, -0.3, -kLn2, -5.0, mid, hi}) {
      const double x = d.inverse_log_sf(lq);
      CHECK(d.log_sf(x) == Approx(lq).epsilon(1e-9));
    }
  }
}

TEST_CASE("catalog errors", "[distributions]") {
  CHECK_THROWS_AS(parse_distribution("cauchy"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("weibull"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("weibull:-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("weibull:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("uniform01:1"), std::invalid_argument);
  const auto d = catalog_get("std_normal");
  CHECK_THROWS(d.quantile(0.0));
  CHECK_THROWS(d.quantile(1.0));
  CHECK_THROWS(d.inverse_log_sf(0.0));
}

TEST_CASE("format_double is shortest round-trip", "[distributions]") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(1e300) == "1e+300");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-310, 6.02214076e23}) {
    CHECK(*parse_double(format_double(v)) == v);
  }
  CHECK(*parse_double("-inf") == -kInf);
  CHECK_FALSE(parse_double("1.0abc"));
}
