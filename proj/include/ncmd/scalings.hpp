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

#ifndef NCMD_SCALINGS_HPP
#define NCMD_SCALINGS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncmd/families.hpp"
#include "ncmd/format.hpp"

namespace ncmd {

enum class ScalingForm { power, logpow, table };

/**
 * Moderate-deviation scaling a_n, expressed against the family speed v_n:
 * power(g) gives a_n = v_n^-g, logpow(g) gives a_n = (log v_n)^-g, and a
 * table gives a_n directly by n.
 */
class ScalingFamily {
public:
  static ScalingFamily power(double gamma) { return ScalingFamily(ScalingForm::power, gamma, {}, ""); }
  static ScalingFamily logpow(double gamma) { return ScalingFamily(ScalingForm::logpow, gamma, {}, ""); }
  static ScalingFamily table(std::map<std::int64_t, double> values, std::string source) {
    if (values.empty()) throw std::invalid_argument("scaling table '" + source + "' is empty");
    for (const auto& [n, a] : values) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("scaling table '" + source + "': a_n must be positive at n = " + std::to_string(n));
      }
    }
    return ScalingFamily(ScalingForm::table, kNaN, std::make_shared<const std::map<std::int64_t, double>>(std::move(values)),
                         std::move(source));
  }

  [[nodiscard]] ScalingForm form() const { return form_; }
  [[nodiscard]] double gamma() const { return gamma_; }

  [[nodiscard]] std::string spec() const {
    switch (form_) {
      case ScalingForm::power: return "pow:" + format_double(gamma_);
      case ScalingForm::logpow: return "logpow:" + format_double(gamma_);
      case ScalingForm::table: return "table:" + source_;
    }
    return {};
  }

  /// a_n for the given family.
  [[nodiscard]] double a(const Family& fam, std::int64_t n) const {
    switch (form_) {
      case ScalingForm::power: return std::pow(fam.speed(n), -gamma_);
      case ScalingForm::logpow: {
        const double lv = std::log(fam.speed(n));
        if (!(lv > 0.0)) {
          throw std::domain_error("logpow scaling needs v_n > e; got v_n = " + format_double(fam.speed(n)) +
                                  " at n = " + std::to_string(n));
        }
        return std::pow(lv, -gamma_);
      }
      case ScalingForm::table: {
        auto it = table_->find(n);
        if (it == table_->end()) {
          throw std::domain_error("scaling table '" + source_ + "' has no entry for n = " + std::to_string(n));
        }
        return it->second;
      }
    }
    return kNaN;
  }

  [[nodiscard]] const std::map<std::int64_t, double>* table_values() const { return table_.get(); }

private:
  ScalingFamily(ScalingForm form, double gamma, std::shared_ptr<const std::map<std::int64_t, double>> table,
                std::string source)
      : form_(form), gamma_(gamma), table_(std::move(table)), source_(std::move(source)) {
    if (form_ != ScalingForm::table && (!(gamma_ >= 0.0) || !std::isfinite(gamma_))) {
      throw std::invalid_argument("scaling exponent must be a finite number >= 0");
    }
  }

  ScalingForm form_;
  double gamma_;
  std::shared_ptr<const std::map<std::int64_t, double>> table_;
  std::string source_;
};

/// Reads "n a_n" pairs, one per line, separated by whitespace or a comma.
/// Blank lines and lines starting with '#' are skipped.
inline ScalingFamily load_scaling_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scaling table '" + path + "'");
  std::map<std::int64_t, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::string ns, as;
    ss >> ns >> as;
    const auto nv = parse_double(ns);
    const auto av = parse_double(as);
    if (!nv || !av || *nv < 1.0 || *nv != std::floor(*nv)) {
      throw std::invalid_argument("scaling table '" + path + "' line " + std::to_string(lineno) + ": bad entry '" +
                                  line + "'");
    }
    values[static_cast<std::int64_t>(*nv)] = *av;
  }
  return ScalingFamily::table(std::move(values), path);
}

/// Parses `pow:<gamma>`, `logpow:<gamma>` or `table:<path>`; `R1` and `R2`
/// name the boundary scalings pow:1 and pow:0.
inline ScalingFamily parse_scaling(std::string_view spec) {
  if (spec == "R1") return ScalingFamily::power(1.0);
  if (spec == "R2") return ScalingFamily::power(0.0);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bad scaling '" + std::string(spec) + "'");
  const auto head = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (head == "table") return load_scaling_table(std::string(arg));
  const auto g = parse_double(arg);
  if (!g) throw std::invalid_argument("bad scaling exponent '" + std::string(arg) + "'");
  if (head == "pow") return ScalingFamily::power(*g);
  if (head == "logpow") return ScalingFamily::logpow(*g);
  throw std::invalid_argument("unknown scaling form '" + std::string(head) + "'");
}

struct ConditionVerdict {
  bool evaluated = false;
  bool holds = false;
  /// True when decided by pattern match on the form rather than by trend.
  bool exact = false;
  double first = kNaN;
  double last = kNaN;
  std::string note;
};

struct ScalingReport {
  std::string scaling;
  std::string family;
  ConditionVerdict a_to_0;
  ConditionVerdict av_to_inf;
  /// a_n log n -> 0; evaluated for the replacement family only.
  ConditionVerdict alogn_to_0;
  [[nodiscard]] bool accepted() const {
    return a_to_0.holds && av_to_inf.holds && (!alogn_to_0.evaluated || alogn_to_0.holds);
  }
};

namespace detail {

/// Decade endpoints 10^k inside [lo, hi], plus lo and hi themselves.
inline std::vector<std::int64_t> decade_points(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out{lo};
  for (double p = std::ceil(std::log10(static_cast<double>(lo))); std::pow(10.0, p) < static_cast<double>(hi); p += 1.0) {
    const auto v = static_cast<std::int64_t>(std::llround(std::pow(10.0, p)));
    if (v > out.back()) out.push_back(v);
  }
  if (hi > out.back()) out.push_back(hi);
  return out;
}

inline bool strictly_monotone(const std::vector<double>& v, bool decreasing) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (decreasing ? !(v[i] < v[i - 1]) : !(v[i] > v[i - 1])) return false;
  }
  return true;
}

inline ConditionVerdict trend_verdict(const std::vector<double>& v, bool decreasing) {
  ConditionVerdict c;
  c.evaluated = true;
  c.first = v.front();
  c.last = v.back();
  c.holds = strictly_monotone(v, decreasing);
  c.note = std::string("strictly ") + (decreasing ? "decreasing" : "increasing") + " over decade endpoints: " +
           (c.holds ? "yes" : "no");
  return c;
}

}  // namespace detail

/**
 * Checks a_n -> 0, a_n v_n -> inf and, for the replacement family,
 * a_n log n -> 0. Power and logpow forms get exact verdicts; tables are
 * judged by strict monotonicity over decade endpoints of n_range. First and
 * last values are always reported.
 */
inline ScalingReport validate(const ScalingFamily& s, const Family& fam, std::int64_t n_lo, std::int64_t n_hi) {
  n_lo = std::max(n_lo, fam.min_n());
  if (!(n_hi >= 1000 * n_lo)) {
    throw std::invalid_argument("validate: the n range must span at least 3 decades");
  }
  ScalingReport r;
  r.scaling = s.spec();
  r.family = fam.spec();
  std::vector<std::int64_t> pts;
  if (s.form() == ScalingForm::table) {
    for (const auto& [n, a] : *s.table_values()) {
      if (n >= n_lo && n <= n_hi) pts.push_back(n);
    }
    if (pts.size() < 2) throw std::invalid_argument("validate: scaling table has fewer than two entries in range");
  } else {
    pts = detail::decade_points(n_lo, n_hi);
  }

  std::vector<double> a_seq, av_seq, alog_seq;
  bool finite = true;
  for (auto n : pts) {
    double a = kNaN;
    try {
      a = s.a(fam, n);
    } catch (const std::domain_error&) {
      finite = false;
      break;
    }
    a_seq.push_back(a);
    av_seq.push_back(a * fam.speed(n));
    alog_seq.push_back(a * std::log(static_cast<double>(n)));
  }
  const bool replacement = fam.kind() == FamilyKind::replacement;

  if (!finite) {
    r.a_to_0 = {true, false, false, kNaN, kNaN, "a_n undefined on part of the range"};
    r.av_to_inf = r.a_to_0;
    if (replacement) r.alogn_to_0 = r.a_to_0;
    return r;
  }

  if (s.form() == ScalingForm::table) {
    r.a_to_0 = detail::trend_verdict(a_seq, true);
    r.av_to_inf = detail::trend_verdict(av_seq, false);
    if (replacement) r.alogn_to_0 = detail::trend_verdict(alog_seq, true);
    return r;
  }

  const double g = s.gamma();
  auto exact = [](bool holds, const std::vector<double>& seq, std::string note) {
    return ConditionVerdict{true, holds, true, seq.front(), seq.back(), std::move(note)};
  };
  if (s.form() == ScalingForm::power) {
    r.a_to_0 = exact(g > 0.0, a_seq, "a_n = v_n^-" + format_double(g));
    r.av_to_inf = exact(g < 1.0, av_seq, "a_n v_n = v_n^" + format_double(1.0 - g));
    // v_n = n for the replacement family.
    if (replacement) r.alogn_to_0 = exact(g > 0.0, alog_seq, "a_n log n = n^-" + format_double(g) + " log n");
  } else {
    r.a_to_0 = exact(g > 0.0, a_seq, "a_n = (log v_n)^-" + format_double(g));
    r.av_to_inf = exact(true, av_seq, "a_n v_n = v_n (log v_n)^-" + format_double(g));
    if (replacement) r.alogn_to_0 = exact(g > 1.0, alog_seq, "a_n log n = (log n)^" + format_double(1.0 - g));
  }
  return r;
}

struct BoundaryScaling {
  std::string tag;
  ScalingFamily scaling;
  bool violates_a_to_0 = false;
  bool violates_av_to_inf = false;
};

/// The two degenerate scalings: R1 (a_n = 1/v_n, the LD speed) and R2
/// (a_n = 1, the weak-convergence scale).
inline std::pair<BoundaryScaling, BoundaryScaling> boundary_regimes(const Family&) {
  return {BoundaryScaling{"R1", ScalingFamily::power(1.0), false, true},
          BoundaryScaling{"R2", ScalingFamily::power(0.0), true, false}};
}

}  // namespace ncmd

#endif  // NCMD_SCALINGS_HPP
