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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch_amalgamated.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("ncmd_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string(NCMD_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t c = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++c;
  return c;
}

const char* kHeader = "family,regime,scaling,n,x,log_p_exact,log_p_mc,stderr_log,s_n,normalized_rate,rate_target,residual";

}  // namespace

TEST_CASE("verify exit codes", "[cli]") {
  CHECK(run("verify ld --family minima:exponential:1 --x 0.3,0.8 --n 1e2,1e3,1e4,1e5").code == 0);
  const auto rej = run("verify md --family replacement:exponential:1,exponential:2,t=1,beta=0.4 --scaling logpow:0.5 "
                       "--x 1 --n 1e2,1e3,1e4,1e5");
  CHECK(rej.code == 1);
  CHECK(rej.err.find("a_n log n") != std::string::npos);
  const auto weak = run("verify weak --family coupon --n 50,200,1000");
  CHECK(weak.code == 0);
  CHECK(weak.out.find("n,sup_distance") != std::string::npos);
  // Gumbel MD at n <= 1e5 misses the default tolerance.
  CHECK(run("verify md --family gumbel_maxima:weibull:2 --scaling pow:0.5 --x 1 --n 1e2,1e3,1e4,1e5").code == 2);
  CHECK(run("verify ld --family coupon --x 2 --n 10,100,1000,100000").code == 3);
}

TEST_CASE("usage errors name the offending token", "[cli]") {
  const auto bad_family = run("verify ld --family minima:cauchy --x 0.3 --n 1e2,1e3,1e4");
  CHECK(bad_family.code == 1);
  CHECK(bad_family.err.find("cauchy") != std::string::npos);
  const auto bad_n = run("verify ld --family coupon --x 0.3 --n 1e2,zz,1e4");
  CHECK(bad_n.code == 1);
  CHECK(bad_n.err.find("zz") != std::string::npos);
  const auto bad_scaling = run("verify md --family coupon --scaling pow:q --x 1 --n 1e2,1e3,1e4");
  CHECK(bad_scaling.code == 1);
  CHECK(bad_scaling.err.find("q") != std::string::npos);
  CHECK(run("verify sideways --family coupon --x 1 --n 1e2,1e3,1e4").code == 1);
  CHECK(run("verify ld --x 1 --n 1e2,1e3,1e4").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("").code == 1);
  CHECK(run("verify ld --family coupon --x 1 --n 1e2,1e3").code == 1);
}

TEST_CASE("verify writes CSV, JSON and SVG", "[cli]") {
  const auto csv = scratch() / "gm.csv";
  const auto json = scratch() / "gm.json";
  const auto svg = scratch() / "gm.svg";
  const auto r = run("verify ld --family gumbel_maxima:weibull:2 --x 0.5,1 --n 1e2,1e3,1e4,1e5 --csv " + csv.string() +
                     " --json " + json.string() + " --plot " + svg.string());
  CHECK(r.code == 0);
  const auto text = slurp(csv);
  CHECK(text.substr(0, text.find('\n')) == kHeader);
  CHECK(count(text, "\n") == 9);
  const auto plot = slurp(svg);
  CHECK(count(plot, "<polyline") == 2);
  CHECK(plot.find("id=\"x-axis\"") != std::string::npos);
  CHECK(plot.find("id=\"y-axis\"") != std::string::npos);
  CHECK(slurp(json).find("\"verdict\": \"pass\"") != std::string::npos);
}

TEST_CASE("config files with flag overrides", "[cli]") {
  const auto cfg = scratch() / "run.json";
  {
    std::ofstream out(cfg);
    out << R"({"family": "minima:exponential:1", "regime": "ld", "n": "1e2,1e3,1e4,1e5", "x": "0.3"})";
  }
  CHECK(run("verify --config " + cfg.string()).code == 0);
  const auto r = run("verify --config " + cfg.string() + " --x 0.9");
  CHECK(r.code == 0);
  CHECK(r.out.find(",0.9,") != std::string::npos);
  CHECK(r.out.find(",0.3,") == std::string::npos);
  CHECK(run("verify --config " + (scratch() / "missing.json").string()).code == 1);
  for (const auto& entry : fs::directory_iterator(NCMD_CONFIG_DIR)) {
    INFO(entry.path());
    const int code = run("verify --config " + entry.path().string()).code;
    CHECK((code == 0 || code == 2 || code == 3));
  }
}

TEST_CASE("lemmas", "[cli]") {
  CHECK(run("lemmas --dist weibull:2").code == 0);
  const auto ln = run("lemmas --dist lognormal");
  CHECK(ln.code == 2);
  CHECK(ln.out.find("MDA violation") != std::string::npos);
  const auto ex = run("lemmas --dist exponential:1");
  CHECK(ex.code == 0);
  CHECK(ex.out.find("ell_estimate=1 ") != std::string::npos);
  CHECK(run("lemmas --dist nothing").code == 1);
  CHECK(run("lemmas").code == 1);
}

TEST_CASE("report merges, plots and rejects corrupt input", "[cli]") {
  const auto a = scratch() / "a.json";
  const auto b = scratch() / "b.json";
  REQUIRE(run("verify ld --family minima:exponential:1 --x 0.8 --n 1e2,1e3,1e4,1e5 --json " + a.string()).code == 0);
  REQUIRE(run("verify ld --family minima:exponential:1 --x 0.3 --n 1e2,1e3,1e4,1e5 --json " + b.string()).code == 0);
  const auto plots = scratch() / "plots";
  const auto merged = run("report " + a.string() + " " + b.string() + " --plot " + plots.string());
  CHECK(merged.code == 0);
  std::istringstream lines(merged.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kHeader);
  std::vector<std::string> xs;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    xs.push_back(cells.at(4) + "@" + cells.at(3));
  }
  CHECK(xs == std::vector<std::string>{"0.3@100", "0.3@1000", "0.3@10000", "0.3@100000",
                                       "0.8@100", "0.8@1000", "0.8@10000", "0.8@100000"});
  CHECK(fs::exists(plots / "LD.svg"));
  CHECK(count(slurp(plots / "LD.svg"), "<polyline") == 2);

  const auto corrupt = scratch() / "corrupt.json";
  {
    std::ofstream out(corrupt);
    out << "{\"family\": \"coupon\", \"rows\": [";
  }
  CHECK(run("report " + corrupt.string()).code == 1);
  CHECK(run("report " + (scratch() / "absent.json").string()).code == 1);
}
