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

// Exercises the shared library through its C header only.

#include <dpdp/dpdp.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

namespace {

namespace fs = std::filesystem;

fs::path TempDir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("dpdp_capi_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST_CASE("names and status strings") {
  CHECK(std::strlen(dpdp_version()) > 0);
  dpdp_problem p;
  CHECK(dpdp_problem_parse("tsptw", &p) == DPDP_OK);
  CHECK(p == DPDP_TSPTW);
  CHECK(std::string(dpdp_problem_name(DPDP_VRP)) == "vrp");
  CHECK(dpdp_problem_parse("cvrp", &p) == DPDP_ERR_VALIDATION);
  CHECK(std::strlen(dpdp_last_error()) > 0);
  dpdp_policy policy;
  for (const char* name : {"heat-potential", "heat", "cost-heat-potential", "cost-heat", "cost"}) {
    REQUIRE(dpdp_policy_parse(name, &policy) == DPDP_OK);
    CHECK(std::string(dpdp_policy_name(policy)) == name);
  }
  CHECK(std::string(dpdp_status_string(DPDP_ERR_LIMIT)).size() > 0);
}

TEST_CASE("instances round trip") {
  dpdp_instance* inst = nullptr;
  REQUIRE(dpdp_instance_generate(DPDP_VRP, 20, 3, 0.0, &inst) == DPDP_OK);
  CHECK(dpdp_instance_problem(inst) == DPDP_VRP);
  CHECK(dpdp_instance_size(inst) == 21);
  CHECK(dpdp_instance_capacity(inst) == 30.0);
  const fs::path path = TempDir("inst") / "a.json";
  REQUIRE(dpdp_instance_write(inst, path.c_str()) == DPDP_OK);
  dpdp_instance* back = nullptr;
  REQUIRE(dpdp_instance_read(path.c_str(), &back) == DPDP_OK);
  double a = 0, b = 0;
  REQUIRE(dpdp_instance_cost(inst, 3, 7, &a) == DPDP_OK);
  REQUIRE(dpdp_instance_cost(back, 3, 7, &b) == DPDP_OK);
  CHECK(a == b);
  CHECK(dpdp_instance_cost(inst, 3, 99, &a) == DPDP_ERR_INVALID_ARGUMENT);
  dpdp_instance_free(back);
  dpdp_instance_free(inst);

  dpdp_instance* bad = nullptr;
  CHECK(dpdp_instance_parse("{not json", &bad) == DPDP_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(dpdp_instance_read("/nonexistent/x.json", &bad) == DPDP_ERR_IO);
  CHECK(dpdp_instance_generate(DPDP_TSP, 0, 1, 0.0, &bad) == DPDP_ERR_VALIDATION);
  CHECK(dpdp_instance_generate(DPDP_TSP, 5, 1, 0.0, nullptr) == DPDP_ERR_INVALID_ARGUMENT);
  dpdp_instance_free(nullptr);
}

TEST_CASE("solve and check") {
  dpdp_instance* inst = nullptr;
  REQUIRE(dpdp_instance_parse(
              R"({"problem": "tsp", "coords": [[0, 0], [3, 0], [0, 4]]})", &inst) == DPDP_OK);
  dpdp_solver_config cfg;
  dpdp_solver_config_init(&cfg);
  CHECK(cfg.beam_size >= 1);
  dpdp_solution* sol = nullptr;
  REQUIRE(dpdp_solve(inst, nullptr, &cfg, &sol) == DPDP_OK);
  CHECK(dpdp_solution_found(sol));
  CHECK(dpdp_solution_feasible(sol));
  CHECK(dpdp_solution_cost(sol) == doctest::Approx(12.0));
  CHECK(dpdp_solution_dead_step(sol) == -1);
  size_t count = 0;
  const int* actions = dpdp_solution_actions(sol, &count);
  REQUIRE(count == 3);
  CHECK(actions[2] == 0);
  CHECK(dpdp_solution_num_routes(sol) == 1);
  size_t len = 0;
  const int* route = dpdp_solution_route(sol, 0, &len);
  CHECK(len == 4);
  CHECK(route[0] == 0);
  CHECK(dpdp_solution_route(sol, 1, &len) == nullptr);
  dpdp_solve_stats stats;
  dpdp_solution_stats(sol, &stats);
  CHECK(stats.steps > 0);

  int ok = 0;
  double cost = 0;
  REQUIRE(dpdp_check_actions(inst, nullptr, nullptr, actions, count, &ok, &cost) == DPDP_OK);
  CHECK(ok == 1);
  CHECK(cost == doctest::Approx(12.0));
  const int twice[] = {1, 1, 0};
  REQUIRE(dpdp_check_actions(inst, nullptr, nullptr, twice, 3, &ok, &cost) == DPDP_OK);
  CHECK(ok == 0);
  CHECK(std::strlen(dpdp_last_error()) > 0);
  dpdp_solution_free(sol);

  cfg.beam_size = 0;
  CHECK(dpdp_solve(inst, nullptr, &cfg, &sol) == DPDP_ERR_INVALID_ARGUMENT);
  dpdp_solver_config_init(&cfg);
  cfg.sparsify = DPDP_SPARSIFY_KNN;
  cfg.knn = 5;
  CHECK(dpdp_solve(inst, nullptr, &cfg, &sol) == DPDP_ERR_VALIDATION);
  dpdp_instance_free(inst);
}

TEST_CASE("heatmaps and oracles") {
  dpdp_instance* inst = nullptr;
  REQUIRE(dpdp_instance_generate(DPDP_TSP, 8, 4, 0.0, &inst) == DPDP_OK);
  dpdp_heatmap* heat = nullptr;
  REQUIRE(dpdp_heatmap_from_costs(inst, 1, &heat) == DPDP_OK);
  CHECK(dpdp_heatmap_size(heat) == 8);
  CHECK(dpdp_heatmap_at(heat, 2, 2) == 0.0);
  const fs::path path = TempDir("heat") / "a.heatmap";
  REQUIRE(dpdp_heatmap_write(heat, path.c_str()) == DPDP_OK);
  dpdp_heatmap* back = nullptr;
  REQUIRE(dpdp_heatmap_read(path.c_str(), 8, &back) == DPDP_OK);
  CHECK(dpdp_heatmap_at(back, 1, 5) == doctest::Approx(dpdp_heatmap_at(heat, 1, 5)));
  dpdp_heatmap* wrong = nullptr;
  CHECK(dpdp_heatmap_read(path.c_str(), 9, &wrong) == DPDP_ERR_VALIDATION);

  dpdp_solver_config cfg;
  dpdp_solver_config_init(&cfg);
  cfg.beam_size = 8u << 8;
  cfg.policy = DPDP_POLICY_HEAT_POTENTIAL;
  dpdp_solution* full = nullptr;
  REQUIRE(dpdp_solve(inst, back, &cfg, &full) == DPDP_OK);
  dpdp_solution* brute = nullptr;
  dpdp_solution* dp = nullptr;
  REQUIRE(dpdp_oracle_brute_force(inst, &brute) == DPDP_OK);
  REQUIRE(dpdp_oracle_exact_dp(inst, &dp) == DPDP_OK);
  CHECK(dpdp_solution_cost(full) == doctest::Approx(dpdp_solution_cost(brute)).epsilon(1e-12));
  CHECK(dpdp_solution_cost(dp) == doctest::Approx(dpdp_solution_cost(brute)).epsilon(1e-12));
  CHECK(dpdp_solution_nodes_searched(brute) > 0);
  dpdp_solution_free(full);
  dpdp_solution_free(brute);
  dpdp_solution_free(dp);
  dpdp_heatmap_free(back);
  dpdp_heatmap_free(heat);
  dpdp_instance_free(inst);

  REQUIRE(dpdp_instance_generate(DPDP_TSP, 20, 1, 0.0, &inst) == DPDP_OK);
  dpdp_solution* none = nullptr;
  CHECK(dpdp_oracle_brute_force(inst, &none) == DPDP_ERR_LIMIT);
  CHECK(none == nullptr);
  dpdp_instance_free(inst);
}

TEST_CASE("no solution is not an error") {
  dpdp_instance* inst = nullptr;
  REQUIRE(dpdp_instance_parse(
              R"({"problem": "tsptw", "coords": [[0, 0], [10, 0], [0, 10]],
                  "time_windows": [[0, null], [0, 10], [0, 10]]})",
              &inst) == DPDP_OK);
  dpdp_solver_config cfg;
  dpdp_solver_config_init(&cfg);
  dpdp_solution* sol = nullptr;
  REQUIRE(dpdp_solve(inst, nullptr, &cfg, &sol) == DPDP_OK);
  CHECK_FALSE(dpdp_solution_found(sol));
  CHECK(dpdp_solution_dead_step(sol) >= 0);
  size_t count = 99;
  dpdp_solution_actions(sol, &count);
  CHECK(count == 0);
  dpdp_solution_free(sol);
  dpdp_instance_free(inst);
}

}  // namespace
