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

#ifndef NCMD_CONFIG_HPP
#define NCMD_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ncmd/diagnostics.hpp"
#include "ncmd/format.hpp"

namespace ncmd {

/// Parses "1e2,1e3,500" into positive integers.
inline std::vector<std::int64_t> parse_n_list(std::string_view s) {
  std::vector<std::int64_t> out;
  for (auto tok : split(s, ',')) {
    const auto v = parse_double(tok);
    if (!v || !(*v >= 1.0) || *v != std::floor(*v) || *v > 9.0e18) {
      throw std::invalid_argument("bad n value '" + std::string(tok) + "'");
    }
    out.push_back(static_cast<std::int64_t>(*v));
  }
  if (out.empty()) throw std::invalid_argument("empty n list");
  return out;
}

inline std::vector<double> parse_x_list(std::string_view s) {
  std::vector<double> out;
  for (auto tok : split(s, ',')) {
    const auto v = parse_double(tok);
    if (!v || !std::isfinite(*v)) throw std::invalid_argument("bad x value '" + std::string(tok) + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw std::invalid_argument("empty x list");
  return out;
}

/// "lo:hi:count" into a linear grid.
inline std::vector<double> parse_x_grid(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw std::invalid_argument("bad x grid '" + std::string(s) + "', expected lo:hi:count");
  const auto lo = parse_double(parts[0]);
  const auto hi = parse_double(parts[1]);
  const auto c = parse_double(parts[2]);
  if (!lo || !hi || !(*hi > *lo)) throw std::invalid_argument("bad x grid bounds in '" + std::string(s) + "'");
  if (!c || *c < 2 || *c != std::floor(*c)) throw std::invalid_argument("bad x grid count '" + std::string(parts[2]) + "'");
  const int count = static_cast<int>(*c);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(*lo + (*hi - *lo) * i / (count - 1));
  return out;
}

struct RunConfig {
  std::string family;
  std::optional<Regime> regime;
  std::string scaling;
  std::vector<std::int64_t> n_list;
  std::vector<double> x_list;
  std::string x_grid;
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  Tolerances tolerances;
  std::string csv_path;
  std::string json_path;
  std::string plot_path;
};

namespace detail {

inline std::string join_n(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string join_x(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace detail

/// Canonical JSON rendering; empty and default-valued optional fields are omitted.
inline std::string render_config(const RunConfig& c) {
  nlohmann::ordered_json j;
  if (!c.family.empty()) j["family"] = c.family;
  if (c.regime) j["regime"] = to_string(*c.regime);
  if (!c.scaling.empty()) j["scaling"] = c.scaling;
  if (!c.n_list.empty()) j["n"] = detail::join_n(c.n_list);
  if (!c.x_list.empty()) j["x"] = detail::join_x(c.x_list);
  if (!c.x_grid.empty()) j["x_grid"] = c.x_grid;
  if (c.trials > 0) {
    j["mc"] = {{"trials", c.trials}, {"seed", c.seed}, {"workers", c.workers}};
  }
  j["tolerances"] = {{"ld_rel", c.tolerances.ld_rel},
                     {"md_rel", c.tolerances.md_rel},
                     {"weak_abs", c.tolerances.weak_abs},
                     {"monotone_slack", c.tolerances.monotone_slack}};
  nlohmann::ordered_json out;
  if (!c.csv_path.empty()) out["csv"] = c.csv_path;
  if (!c.json_path.empty()) out["json"] = c.json_path;
  if (!c.plot_path.empty()) out["plot"] = c.plot_path;
  if (!out.empty()) j["output"] = out;
  return j.dump(2) + "\n";
}

/**
 * Parses a JSON run configuration. Lists may be given as comma-separated
 * strings or as JSON arrays.
 */
inline RunConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  static const std::vector<std::string> known{"family", "regime", "scaling", "n", "x", "x_grid", "mc", "tolerances", "output"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw std::invalid_argument("config: unknown key '" + k + "'");
    }
  }
  RunConfig c;
  try {
    c.family = j.value("family", "");
    if (j.contains("regime")) {
      const auto s = j["regime"].get<std::string>();
      c.regime = parse_regime(s);
      if (!c.regime) throw std::invalid_argument("config: unknown regime '" + s + "'");
    }
    c.scaling = j.value("scaling", "");
    auto list_text = [&](const char* key) -> std::string {
      const auto& v = j[key];
      if (v.is_string()) return v.get<std::string>();
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].is_string() ? v[i].get<std::string>() : format_double(v[i].get<double>());
      }
      return s;
    };
    if (j.contains("n")) c.n_list = parse_n_list(list_text("n"));
    if (j.contains("x")) c.x_list = parse_x_list(list_text("x"));
    c.x_grid = j.value("x_grid", "");
    if (!c.x_grid.empty()) parse_x_grid(c.x_grid);
    if (j.contains("mc")) {
      const auto& m = j["mc"];
      c.trials = m.value("trials", std::int64_t{0});
      c.seed = m.value("seed", std::uint64_t{1});
      c.workers = m.value("workers", 1u);
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      c.tolerances.ld_rel = t.value("ld_rel", c.tolerances.ld_rel);
      c.tolerances.md_rel = t.value("md_rel", c.tolerances.md_rel);
      c.tolerances.weak_abs = t.value("weak_abs", c.tolerances.weak_abs);
      c.tolerances.monotone_slack = t.value("monotone_slack", c.tolerances.monotone_slack);
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      c.csv_path = o.value("csv", "");
      c.json_path = o.value("json", "");
      c.plot_path = o.value("plot", "");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace ncmd

#endif  // NCMD_CONFIG_HPP
