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

// ncmd: verify / lemmas / report front end.
//
// Exit codes: 0 pass, 1 usage error, 2 fail, 3 inconclusive.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncmd/ncmd.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitInconclusive = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ncmd::Verdict v) {
  switch (v) {
    case ncmd::Verdict::pass: return kExitPass;
    case ncmd::Verdict::fail: return kExitFail;
    case ncmd::Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

template <class F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

void print_summary(const ncmd::ConvergenceReport& r) {
  std::cout << "family:  " << r.family << "\n"
            << "regime:  " << ncmd::to_string(r.regime) << "\n";
  if (!r.scaling.empty()) std::cout << "scaling: " << r.scaling << "\n";
  if (r.regime == ncmd::Regime::WEAK) {
    std::cout << "n,sup_distance\n";
    for (const auto& [n, d] : ncmd::sup_distance_by_n(r)) std::cout << n << "," << ncmd::format_double(d) << "\n";
  } else {
    std::cout << "n,x,normalized_rate,rate_target,residual\n";
    for (const auto& row : r.rows) {
      std::cout << row.n << "," << ncmd::format_double(row.x) << "," << ncmd::format_double(row.normalized_rate) << ","
                << ncmd::format_double(row.rate_target) << "," << ncmd::format_double(row.residual) << "\n";
    }
  }
  for (const auto& note : r.notes) std::cerr << "note: " << note << "\n";
  std::cout << "verdict: " << ncmd::to_string(r.verdict) << "\n";
}

int cmd_verify(const ncmd::RunConfig& cfg) {
  if (!cfg.regime) throw UsageError("verify needs a regime: ld, md or weak");
  if (cfg.family.empty()) throw UsageError("verify needs --family");
  if (cfg.n_list.empty()) throw UsageError("verify needs --n");
  const auto fam = as_usage([&] { return ncmd::parse_family(cfg.family); });
  const ncmd::McOptions mc{cfg.trials, cfg.seed, cfg.workers};

  ncmd::ConvergenceReport report;
  switch (*cfg.regime) {
    case ncmd::Regime::LD: {
      if (cfg.x_list.empty()) throw UsageError("verify ld needs --x");
      report = as_usage([&] { return ncmd::ldp_probe(fam, cfg.x_list, cfg.n_list, cfg.tolerances, mc); });
      break;
    }
    case ncmd::Regime::MD: {
      if (cfg.x_list.empty()) throw UsageError("verify md needs --x");
      if (cfg.scaling.empty()) throw UsageError("verify md needs --scaling");
      const auto sc = as_usage([&] { return ncmd::parse_scaling(cfg.scaling); });
      report = as_usage([&] { return ncmd::md_probe(fam, sc, cfg.x_list, cfg.n_list, cfg.tolerances, mc); });
      break;
    }
    case ncmd::Regime::WEAK: {
      std::vector<double> grid = cfg.x_list;
      if (!cfg.x_grid.empty()) grid = as_usage([&] { return ncmd::parse_x_grid(cfg.x_grid); });
      if (grid.empty()) grid = ncmd::default_weak_grid(fam);
      report = as_usage([&] { return ncmd::weak_probe(fam, cfg.n_list, grid, cfg.tolerances, mc); });
      break;
    }
  }

  print_summary(report);
  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw std::runtime_error("cannot write '" + cfg.csv_path + "'");
    ncmd::write_csv(out, report);
  }
  if (!cfg.json_path.empty()) write_file(cfg.json_path, ncmd::to_json(report).dump(2) + "\n");
  if (!cfg.plot_path.empty()) {
    write_file(cfg.plot_path, ncmd::render_svg({&report}, report.family + " " + ncmd::to_string(report.regime)));
  }
  return exit_code(report.verdict);
}

int cmd_lemmas(const std::string& dist_spec, const std::string& json_path) {
  const auto d = as_usage([&] { return ncmd::parse_distribution(dist_spec); });
  const auto suite = ncmd::run_lemma_suite(d);
  std::cout << "distribution: " << suite.dist_spec << "\n"
            << "mu: " << ncmd::format_double(suite.mu) << "\n";
  ncmd::Json j;
  j["distribution"] = suite.dist_spec;
  j["mu"] = ncmd::detail::number_to_json(suite.mu);
  j["mda_violation"] = suite.mda_violation;
  if (suite.mda_violation) {
    std::cout << "verdict: fail (MDA violation: " << suite.violation_reason << ")\n";
    j["verdict"] = "fail";
    j["violation_reason"] = suite.violation_reason;
  } else {
    ncmd::Json checks = ncmd::Json::array();
    for (const auto& c : suite.checks) {
      std::cout << c.name << ": " << ncmd::to_string(c.status);
      ncmd::Json values;
      for (const auto& [k, v] : c.values) {
        std::cout << " " << k << "=" << ncmd::format_double(v);
        values[k] = ncmd::detail::number_to_json(v);
      }
      std::cout << "\n";
      checks.push_back({{"name", c.name}, {"status", ncmd::to_string(c.status)}, {"detail", c.detail}, {"values", values}});
    }
    j["checks"] = checks;
    j["verdict"] = suite.all_pass() ? "pass" : "fail";
    std::cout << "verdict: " << (suite.all_pass() ? "pass" : "fail") << "\n";
  }
  if (!json_path.empty()) write_file(json_path, j.dump(2) + "\n");
  return !suite.mda_violation && suite.all_pass() ? kExitPass : kExitFail;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& csv_path, const std::string& plot_dir) {
  std::vector<ncmd::ConvergenceReport> reports;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open report '" + path + "'");
    reports.push_back(as_usage([&] { return ncmd::read_report(in); }));
  }
  if (csv_path.empty() || csv_path == "-") {
    ncmd::write_merged_csv(std::cout, reports);
  } else {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
    ncmd::write_merged_csv(out, reports);
  }
  if (!plot_dir.empty()) {
    std::filesystem::create_directories(plot_dir);
    for (auto regime : {ncmd::Regime::LD, ncmd::Regime::MD, ncmd::Regime::WEAK}) {
      std::vector<const ncmd::ConvergenceReport*> sel;
      for (const auto& r : reports) {
        if (r.regime == regime) sel.push_back(&r);
      }
      if (sel.empty()) continue;
      const auto path = (std::filesystem::path(plot_dir) / (std::string(ncmd::to_string(regime)) + ".svg")).string();
      write_file(path, ncmd::render_svg(sel, sel.front()->family + " " + ncmd::to_string(regime)));
      std::cerr << "wrote " << path << "\n";
    }
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for large, moderate and weak deviation regimes of scaled random sequences"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run an LD, MD or WEAK probe and write reports");
  std::string regime, family, scaling, n_text, x_text, x_grid, csv, json, plot, config_path;
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double tol_ld = 0.05, tol_md = 0.05, tol_weak = 0.05;
  verify->add_option("regime", regime, "ld, md or weak");
  verify->add_option("--config", config_path, "JSON run configuration; flags override its values");
  auto* o_family = verify->add_option("--family", family, "Family spec, e.g. minima:exponential:1");
  auto* o_scaling = verify->add_option("--scaling", scaling, "pow:<g>, logpow:<g> or table:<path>");
  auto* o_n = verify->add_option("--n", n_text, "Comma-separated n values, e.g. 1e2,1e3,1e4");
  auto* o_x = verify->add_option("--x", x_text, "Comma-separated x values");
  auto* o_grid = verify->add_option("--x-grid", x_grid, "Weak grid lo:hi:count");
  auto* o_trials = verify->add_option("--trials", trials, "Monte Carlo trials per row (0 disables)");
  auto* o_seed = verify->add_option("--seed", seed, "Monte Carlo seed");
  auto* o_workers = verify->add_option("--workers", workers, "Monte Carlo worker threads");
  auto* o_tol_ld = verify->add_option("--tol-ld", tol_ld, "Relative LD tolerance");
  auto* o_tol_md = verify->add_option("--tol-md", tol_md, "Relative MD tolerance");
  auto* o_tol_weak = verify->add_option("--tol-weak", tol_weak, "Sup-distance tolerance");
  auto* o_csv = verify->add_option("--csv", csv, "CSV output path");
  auto* o_json = verify->add_option("--json", json, "JSON output path");
  auto* o_plot = verify->add_option("--plot", plot, "SVG output path");

  auto* lemmas = app.add_subcommand("lemmas", "Run the regular-variation checks on a distribution");
  std::string dist, lemmas_json;
  lemmas->add_option("--dist", dist, "Distribution spec, e.g. weibull:2")->required();
  lemmas->add_option("--json", lemmas_json, "JSON output path");

  auto* report = app.add_subcommand("report", "Merge JSON reports into CSV and optional SVG plots");
  std::vector<std::string> inputs;
  std::string report_csv, plot_dir;
  report->add_option("inputs", inputs, "JSON report files")->required();
  report->add_option("--csv", report_csv, "Merged CSV path (default stdout)");
  report->add_option("--plot", plot_dir, "Directory for one SVG per regime");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) {
      ncmd::RunConfig cfg;
      if (!config_path.empty()) cfg = as_usage([&] { return ncmd::load_config(config_path); });
      if (!regime.empty()) {
        cfg.regime = ncmd::parse_regime(regime);
        if (!cfg.regime) throw UsageError("unknown regime '" + regime + "'");
      }
      if (*o_family) cfg.family = family;
      if (*o_scaling) cfg.scaling = scaling;
      if (*o_n) cfg.n_list = as_usage([&] { return ncmd::parse_n_list(n_text); });
      if (*o_x) cfg.x_list = as_usage([&] { return ncmd::parse_x_list(x_text); });
      if (*o_grid) cfg.x_grid = x_grid;
      if (*o_trials) cfg.trials = trials;
      if (*o_seed) cfg.seed = seed;
      if (*o_workers) cfg.workers = workers;
      if (*o_tol_ld) cfg.tolerances.ld_rel = tol_ld;
      if (*o_tol_md) cfg.tolerances.md_rel = tol_md;
      if (*o_tol_weak) cfg.tolerances.weak_abs = tol_weak;
      if (*o_csv) cfg.csv_path = csv;
      if (*o_json) cfg.json_path = json;
      if (*o_plot) cfg.plot_path = plot;
      return cmd_verify(cfg);
    }
    if (*lemmas) return cmd_lemmas(dist, lemmas_json);
    if (*report) return cmd_report(inputs, report_csv, plot_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitUsage;
}
