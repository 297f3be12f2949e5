// Copyright 2026 The DPDP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the command line tool end to end on temporary directories.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run Cli(const std::string& args, bool with_stderr = false) {
  const std::string command =
      std::string(DPDP_CLI_PATH) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  Run run;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) run.out.append(buf, got);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

fs::path Fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dpdp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  return cells;
}

// CSV with the timing columns blanked.
std::string WithoutTimes(const std::string& csv) {
  const auto lines = Lines(csv);
  const auto header = Split(lines.at(0));
  std::string out;
  for (const auto& line : lines) {
    auto cells = Split(line);
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      if (header[i] == "solve_ms" || header[i] == "heatmap_ms") cells[i] = "";
    }
    for (const auto& c : cells) out += c + ",";
    out += "\n";
  }
  return out;
}

TEST_CASE("generate") {
  const fs::path a = Fresh("gen_a");
  const fs::path b = Fresh("gen_b");
  const std::string args = "generate --problem vrp --n 50 --count 3 --seed 7 --out ";
  REQUIRE(Cli(args + a.string()).code == 0);
  REQUIRE(Cli(args + b.string()).code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    CHECK(Slurp(entry.path()) == Slurp(b / entry.path().filename()));
    const auto doc = nlohmann::json::parse(Slurp(entry.path()));
    CHECK(doc["capacity"] == 40.0);
    CHECK(doc["coords"].size() == 51);
  }
  CHECK(files == 3);
  CHECK(Cli("generate --problem cvrp --n 5 --out " + a.string()).code == 2);
}

TEST_CASE("solve writes one row per instance") {
  const fs::path inst = Fresh("solve_inst");
  REQUIRE(Cli("generate --problem tsp --n 12 --count 4 --out " + inst.string()).code == 0);
  const fs::path out1 = Fresh("solve_out1");
  const fs::path out2 = Fresh("solve_out2");
  const std::string args = "solve --problem tsp --beam-size 20 --instances " + inst.string();
  const Run r = Cli(args + " --out " + out1.string());
  CHECK(r.code == 0);
  const std::string csv = Slurp(out1 / "report.csv");
  const auto lines = Lines(csv);
  REQUIRE(lines.size() == 5);
  CHECK(Split(lines[0])[0] == "instance");
  CHECK(Split(lines[1])[1] == "ok");
  CHECK(fs::exists(out1 / "summary.json"));
  CHECK(fs::exists(out1 / "tsp12_0000.solution.json"));
  const auto sol = nlohmann::json::parse(Slurp(out1 / "tsp12_0000.solution.json"));
  CHECK(sol["actions"].size() == 12);

  REQUIRE(Cli(args + " --jobs 2 --out " + out2.string()).code == 0);
  CHECK(WithoutTimes(csv) == WithoutTimes(Slurp(out2 / "report.csv")));

  const fs::path js = Fresh("solve_json");
  REQUIRE(Cli(args + " --json --out " + js.string()).code == 0);
  CHECK(nlohmann::json::parse(Slurp(js / "report.json")).size() == 4);

  CHECK(Cli(args + " --threshold 0.1 --knn 3").code == 2);
  CHECK(Cli("solve --problem tsp --beam-size 0 --instances " + inst.string()).code == 2);
}

TEST_CASE("missing heatmap gives an error row") {
  const fs::path inst = Fresh("heat_inst");
  REQUIRE(Cli("generate --problem tsp --n 8 --count 2 --out " + inst.string()).code == 0);
  const fs::path heat = Fresh("heat_dir");
  {
    // Only the first instance gets a (uniform) heatmap.
    std::ofstream f(heat / "tsp8_0000.heatmap");
    f << "dense 8\n";
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) f << (i == j ? 0.0 : 0.5) << (j < 7 ? " " : "\n");
    }
  }
  const fs::path out = Fresh("heat_out");
  const Run r = Cli("solve --problem tsp --policy heat-potential --instances " + inst.string() +
                    " --heatmap-dir " + heat.string() + " --out " + out.string());
  CHECK(r.code == 1);
  const auto lines = Lines(Slurp(out / "report.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(Split(lines[1])[1] == "ok");
  CHECK(Split(lines[2])[1] == "error");
}

TEST_CASE("reference costs give gaps") {
  const fs::path inst = Fresh("ref_inst");
  REQUIRE(Cli("generate --problem tsp --n 6 --count 1 --out " + inst.string()).code == 0);
  const fs::path ref = Fresh("ref_file") / "ref.csv";
  std::ofstream(ref) << "instance,cost\ntsp6_0000,1.0\n";
  const fs::path out = Fresh("ref_out");
  REQUIRE(Cli("solve --problem tsp --instances " + inst.string() + " --ref-costs " +
              ref.string() + " --out " + out.string()).code == 0);
  const auto lines = Lines(Slurp(out / "report.csv"));
  const auto header = Split(lines[0]);
  const auto row = Split(lines[1]);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "ref_cost") CHECK(std::stod(row[i]) == 1.0);
    if (header[i] == "gap") CHECK(std::stod(row[i]) > 0.0);
  }
}

TEST_CASE("verify") {
  const Run ok = Cli("verify --problem tsp --n 7 --count 10 --seed 3");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("verify: 10/10 passed") != std::string::npos);
  const Run vrp = Cli("verify --problem vrp --n 5 --count 3 --oracle dp");
  CHECK(vrp.code == 0);
  const Run greedy = Cli("verify --problem tsp --n 9 --count 20 --seed 3 --beam-size 1");
  CHECK(greedy.code == 1);
  CHECK(greedy.out.find("FAIL") != std::string::npos);
  CHECK(Cli("verify --problem tsp --n 14 --count 1 --oracle brute").code == 2);
}

TEST_CASE("bench") {
  const fs::path out = Fresh("bench_out");
  // 1000 covers every state at n = 6, so the mean cannot rise with B.
  const Run r = Cli("bench --problem tsp --n 6 --count 3 --beam-sizes 1,1000"
                    " --policies heat-potential,cost-heat-potential,cost --out " +
                    out.string(), true);
  CHECK(r.code == 0);
  std::size_t checks = 0;
  for (const auto& line : Lines(r.out)) checks += line.find("beam-monotonicity") != std::string::npos;
  CHECK(checks == 3);
  std::size_t outputs = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    outputs += entry.path().filename().string().rfind("bench_", 0) == 0;
  }
  CHECK(outputs >= 2);
}

}  // namespace
