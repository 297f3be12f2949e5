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

#include "dpdp/dpdp.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dp.hpp"
#include "heatmap.hpp"
#include "instance.hpp"
#include "oracle.hpp"
#include "solution.hpp"

struct dpdp_instance {
  dpdp::Instance value;
};

struct dpdp_heatmap {
  dpdp::Heatmap value;
};

struct dpdp_solution {
  bool found = false;
  bool feasible = false;
  double cost = 0.0;
  int dead_step = -1;
  std::uint64_t nodes_searched = 0;
  dpdp_solve_stats stats{};
  std::vector<int> actions;
  std::vector<dpdp::Route> routes;
};

namespace {

thread_local std::string last_error;

dpdp_status Fail(dpdp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
dpdp_status Guard(F&& body) {
  try {
    body();
    return DPDP_OK;
  } catch (const dpdp::ParseError& e) {
    return Fail(DPDP_ERR_PARSE, e.what());
  } catch (const dpdp::ValidationError& e) {
    return Fail(DPDP_ERR_VALIDATION, e.what());
  } catch (const dpdp::IoError& e) {
    return Fail(DPDP_ERR_IO, e.what());
  } catch (const dpdp::LimitError& e) {
    return Fail(DPDP_ERR_LIMIT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(DPDP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(DPDP_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(DPDP_ERR_INTERNAL, "unknown error");
  }
}

#define DPDP_REQUIRE(cond, what)                              \
  do {                                                        \
    if (!(cond)) return Fail(DPDP_ERR_INVALID_ARGUMENT, what); \
  } while (0)

static_assert(static_cast<int>(dpdp::PolicyKind::kHeatPotential) == DPDP_POLICY_HEAT_POTENTIAL);
static_assert(static_cast<int>(dpdp::PolicyKind::kCost) == DPDP_POLICY_COST);
static_assert(static_cast<int>(dpdp::ProblemKind::kTsptw) == DPDP_TSPTW);

dpdp::ProblemKind ToKind(dpdp_problem p) { return static_cast<dpdp::ProblemKind>(p); }

bool ValidProblem(int p) { return p >= DPDP_TSP && p <= DPDP_TSPTW; }
bool ValidPolicy(int p) { return p >= DPDP_POLICY_HEAT_POTENTIAL && p <= DPDP_POLICY_COST; }

std::optional<std::string> CheckConfig(const dpdp_solver_config& c) {
  if (c.beam_size == 0) return "beam_size must be at least 1";
  if (!ValidPolicy(c.policy)) return "unknown policy";
  switch (c.sparsify) {
    case DPDP_SPARSIFY_THRESHOLD:
      if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) {
        return "threshold must lie in [0, 1]";
      }
      break;
    case DPDP_SPARSIFY_KNN:
      if (c.knn < 1) return "knn must be at least 1";
      break;
    case DPDP_SPARSIFY_COMPLETE:
      break;
    default:
      return "unknown sparsification mode";
  }
  return std::nullopt;
}

dpdp::SolveOptions ToOptions(const dpdp_solver_config& c) {
  dpdp::SolveOptions o;
  o.solver.beam_size = c.beam_size;
  o.solver.policy = static_cast<dpdp::PolicyKind>(c.policy);
  o.solver.dominance = c.dominance != 0;
  o.solver.score_bound_prefilter = c.score_bound_prefilter != 0;
  o.invert_cost_heat = c.invert_cost_heat != 0;
  switch (c.sparsify) {
    case DPDP_SPARSIFY_KNN:
      o.sparsify.mode = dpdp::Sparsification::Mode::kKnn;
      break;
    case DPDP_SPARSIFY_COMPLETE:
      o.sparsify.mode = dpdp::Sparsification::Mode::kComplete;
      break;
    default:
      o.sparsify.mode = dpdp::Sparsification::Mode::kThreshold;
  }
  o.sparsify.threshold = c.threshold;
  o.sparsify.knn = c.knn;
  return o;
}

dpdp_status RunOracle(const dpdp_instance* instance, dpdp_solution** out,
                      dpdp::OracleResult (*oracle)(const dpdp::Instance&,
                                                   const dpdp::OracleLimits&)) {
  DPDP_REQUIRE(instance != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return Guard([&] {
    const dpdp::OracleResult r = oracle(instance->value, {});
    auto s = std::make_unique<dpdp_solution>();
    s->found = r.feasible();
    s->feasible = r.feasible();
    s->cost = r.optimal_cost.value_or(0.0);
    s->nodes_searched = r.nodes_searched;
    s->actions = r.actions;
    s->routes = r.optimal_routes;
    *out = s.release();
  });
}

}  // namespace

extern "C" {

const char* dpdp_version(void) { return "0.1.0"; }

const char* dpdp_last_error(void) { return last_error.c_str(); }

const char* dpdp_status_string(dpdp_status status) {
  switch (status) {
    case DPDP_OK: return "ok";
    case DPDP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DPDP_ERR_PARSE: return "parse error";
    case DPDP_ERR_VALIDATION: return "validation error";
    case DPDP_ERR_IO: return "i/o error";
    case DPDP_ERR_LIMIT: return "size limit exceeded";
    case DPDP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

dpdp_status dpdp_problem_parse(const char* text, dpdp_problem* out) {
  DPDP_REQUIRE(text != nullptr && out != nullptr, "null argument");
  return Guard([&] { *out = static_cast<dpdp_problem>(dpdp::ParseProblemKind(text)); });
}

const char* dpdp_problem_name(dpdp_problem problem) {
  if (!ValidProblem(problem)) return "unknown";
  return dpdp::ToString(ToKind(problem)).data();
}

dpdp_status dpdp_policy_parse(const char* text, dpdp_policy* out) {
  DPDP_REQUIRE(text != nullptr && out != nullptr, "null argument");
  return Guard([&] { *out = static_cast<dpdp_policy>(dpdp::ParsePolicyKind(text)); });
}

const char* dpdp_policy_name(dpdp_policy policy) {
  if (!ValidPolicy(policy)) return "unknown";
  return dpdp::ToString(static_cast<dpdp::PolicyKind>(policy)).data();
}

dpdp_status dpdp_instance_generate(dpdp_problem problem, int n, uint64_t seed,
                                   double max_window, dpdp_instance** out) {
  DPDP_REQUIRE(out != nullptr, "null argument");
  DPDP_REQUIRE(ValidProblem(problem), "unknown problem");
  *out = nullptr;
  return Guard([&] {
    switch (problem) {
      case DPDP_TSP:
        *out = new dpdp_instance{dpdp::GenerateTsp(n, seed)};
        break;
      case DPDP_VRP:
        *out = new dpdp_instance{dpdp::GenerateVrp(n, seed)};
        break;
      case DPDP_TSPTW:
        *out = new dpdp_instance{dpdp::GenerateTsptw(n, seed, max_window)};
        break;
    }
  });
}

dpdp_status dpdp_instance_read(const char* path, dpdp_instance** out) {
  DPDP_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return Guard([&] { *out = new dpdp_instance{dpdp::ReadInstance(path)}; });
}

dpdp_status dpdp_instance_parse(const char* json, dpdp_instance** out) {
  DPDP_REQUIRE(json != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return Guard([&] { *out = new dpdp_instance{dpdp::InstanceFromJson(json)}; });
}

dpdp_status dpdp_instance_write(const dpdp_instance* instance, const char* path) {
  DPDP_REQUIRE(instance != nullptr && path != nullptr, "null argument");
  return Guard([&] { dpdp::WriteInstance(instance->value, path); });
}

void dpdp_instance_free(dpdp_instance* instance) { delete instance; }

dpdp_problem dpdp_instance_problem(const dpdp_instance* instance) {
  return static_cast<dpdp_problem>(instance->value.kind());
}

size_t dpdp_instance_size(const dpdp_instance* instance) {
  return instance->value.size();
}

double dpdp_instance_capacity(const dpdp_instance* instance) {
  return instance->value.kind() == dpdp::ProblemKind::kVrp
             ? instance->value.capacity()
             : 0.0;
}

dpdp_status dpdp_instance_cost(const dpdp_instance* instance, size_t i,
                               size_t j, double* out) {
  DPDP_REQUIRE(instance != nullptr && out != nullptr, "null argument");
  const size_t n = instance->value.size();
  DPDP_REQUIRE(i < n && j < n, "node index out of range");
  *out = instance->value.costs()(i, j);
  return DPDP_OK;
}

dpdp_status dpdp_heatmap_read(const char* path, size_t expected_n,
                              dpdp_heatmap** out) {
  DPDP_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return Guard([&] { *out = new dpdp_heatmap{dpdp::ReadHeatmap(path, expected_n)}; });
}

dpdp_status dpdp_heatmap_from_costs(const dpdp_instance* instance, int invert,
                                    dpdp_heatmap** out) {
  DPDP_REQUIRE(instance != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return Guard([&] {
    *out = new dpdp_heatmap{dpdp::CostHeatmap(instance->value.costs(), invert != 0)};
  });
}

dpdp_status dpdp_heatmap_write(const dpdp_heatmap* heatmap, const char* path) {
  DPDP_REQUIRE(heatmap != nullptr && path != nullptr, "null argument");
  return Guard([&] { dpdp::WriteHeatmap(heatmap->value, path); });
}

void dpdp_heatmap_free(dpdp_heatmap* heatmap) { delete heatmap; }

size_t dpdp_heatmap_size(const dpdp_heatmap* heatmap) {
  return heatmap->value.size();
}

double dpdp_heatmap_at(const dpdp_heatmap* heatmap, size_t i, size_t j) {
  return heatmap->value(i, j);
}

void dpdp_solver_config_init(dpdp_solver_config* config) {
  if (config == nullptr) return;
  const dpdp::SolveOptions defaults;
  config->beam_size = defaults.solver.beam_size;
  config->policy = static_cast<dpdp_policy>(defaults.solver.policy);
  config->invert_cost_heat = defaults.invert_cost_heat ? 1 : 0;
  config->dominance = defaults.solver.dominance ? 1 : 0;
  config->score_bound_prefilter = defaults.solver.score_bound_prefilter ? 1 : 0;
  config->sparsify = DPDP_SPARSIFY_THRESHOLD;
  config->threshold = defaults.sparsify.threshold;
  config->knn = 0;
}

dpdp_status dpdp_solve(const dpdp_instance* instance, const dpdp_heatmap* heatmap,
                       const dpdp_solver_config* config, dpdp_solution** out) {
  DPDP_REQUIRE(instance != nullptr && config != nullptr && out != nullptr,
               "null argument");
  *out = nullptr;
  if (auto bad = CheckConfig(*config)) return Fail(DPDP_ERR_INVALID_ARGUMENT, *bad);
  return Guard([&] {
    const dpdp::SolveResult r = dpdp::Solve(
        instance->value, heatmap ? &heatmap->value : nullptr, ToOptions(*config));
    auto s = std::make_unique<dpdp_solution>();
    s->dead_step = r.dead_step;
    s->nodes_searched = r.stats.candidates;
    s->stats = {r.stats.steps, r.stats.candidates, r.stats.max_beam};
    if (r.solution) {
      s->found = true;
      s->feasible = r.solution->feasible;
      s->cost = r.solution->cost;
      s->actions = r.solution->actions;
      s->routes = r.solution->routes;
    }
    *out = s.release();
  });
}

dpdp_status dpdp_oracle_brute_force(const dpdp_instance* instance,
                                    dpdp_solution** out) {
  return RunOracle(instance, out, &dpdp::BruteForce);
}

dpdp_status dpdp_oracle_exact_dp(const dpdp_instance* instance,
                                 dpdp_solution** out) {
  return RunOracle(instance, out, &dpdp::ExactDp);
}

void dpdp_solution_free(dpdp_solution* solution) { delete solution; }

int dpdp_solution_found(const dpdp_solution* solution) { return solution->found; }

int dpdp_solution_feasible(const dpdp_solution* solution) {
  return solution->feasible;
}

double dpdp_solution_cost(const dpdp_solution* solution) { return solution->cost; }

int dpdp_solution_dead_step(const dpdp_solution* solution) {
  return solution->dead_step;
}

uint64_t dpdp_solution_nodes_searched(const dpdp_solution* solution) {
  return solution->nodes_searched;
}

void dpdp_solution_stats(const dpdp_solution* solution, dpdp_solve_stats* out) {
  if (out != nullptr) *out = solution->stats;
}

const int* dpdp_solution_actions(const dpdp_solution* solution, size_t* count) {
  if (count != nullptr) *count = solution->actions.size();
  return solution->actions.data();
}

size_t dpdp_solution_num_routes(const dpdp_solution* solution) {
  return solution->routes.size();
}

const int* dpdp_solution_route(const dpdp_solution* solution, size_t index,
                               size_t* length) {
  if (index >= solution->routes.size()) {
    if (length != nullptr) *length = 0;
    return nullptr;
  }
  if (length != nullptr) *length = solution->routes[index].size();
  return solution->routes[index].data();
}

dpdp_status dpdp_check_actions(const dpdp_instance* instance,
                               const dpdp_heatmap* heatmap,
                               const dpdp_solver_config* config,
                               const int* actions, size_t count, int* ok,
                               double* cost) {
  DPDP_REQUIRE(instance != nullptr && ok != nullptr, "null argument");
  DPDP_REQUIRE(actions != nullptr || count == 0, "null actions");
  if (config != nullptr) {
    if (auto bad = CheckConfig(*config)) return Fail(DPDP_ERR_INVALID_ARGUMENT, *bad);
  }
  return Guard([&] {
    std::optional<dpdp::SparseGraph> graph;
    if (config != nullptr) {
      const dpdp::SolveOptions o = ToOptions(*config);
      graph = dpdp::MakeGraph(instance->value, heatmap ? &heatmap->value : nullptr,
                              o.sparsify, o.invert_cost_heat);
    }
    const dpdp::CheckResult r = dpdp::CheckSolution(
        instance->value, std::span<const int>(actions, count),
        graph ? &*graph : nullptr);
    *ok = r.ok ? 1 : 0;
    if (cost != nullptr) *cost = r.cost;
    if (!r.ok) last_error = r.error;
  });
}

}  // extern "C"
