/* Copyright 2026 The DPDP Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the dpdp routing solver.
 *
 * Every fallible call returns a dpdp_status. On failure the message of the
 * most recent error on the calling thread is available from
 * dpdp_last_error(). Objects returned through out-parameters are owned by
 * the caller and released with the matching *_free function. */

#ifndef DPDP_DPDP_H_
#define DPDP_DPDP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DPDP_BUILDING_LIBRARY)
#define DPDP_API __declspec(dllexport)
#else
#define DPDP_API __declspec(dllimport)
#endif
#else
#define DPDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dpdp_instance dpdp_instance;
typedef struct dpdp_heatmap dpdp_heatmap;
typedef struct dpdp_solution dpdp_solution;

typedef enum {
  DPDP_OK = 0,
  DPDP_ERR_INVALID_ARGUMENT = 1,
  DPDP_ERR_PARSE = 2,
  DPDP_ERR_VALIDATION = 3,
  DPDP_ERR_IO = 4,
  DPDP_ERR_LIMIT = 5,
  DPDP_ERR_INTERNAL = 6
} dpdp_status;

typedef enum { DPDP_TSP = 0, DPDP_VRP = 1, DPDP_TSPTW = 2 } dpdp_problem;

typedef enum {
  DPDP_POLICY_HEAT_POTENTIAL = 0,
  DPDP_POLICY_HEAT = 1,
  DPDP_POLICY_COST_HEAT_POTENTIAL = 2,
  DPDP_POLICY_COST_HEAT = 3,
  DPDP_POLICY_COST = 4
} dpdp_policy;

typedef enum {
  DPDP_SPARSIFY_THRESHOLD = 0,
  DPDP_SPARSIFY_KNN = 1,
  DPDP_SPARSIFY_COMPLETE = 2
} dpdp_sparsify;

typedef struct {
  size_t beam_size;
  dpdp_policy policy;
  int invert_cost_heat;      /* nonzero: cost heatmap uses 1 - c/max */
  int dominance;             /* zero gives plain beam search */
  int score_bound_prefilter;
  dpdp_sparsify sparsify;
  double threshold;          /* DPDP_SPARSIFY_THRESHOLD */
  int knn;                   /* DPDP_SPARSIFY_KNN */
} dpdp_solver_config;

typedef struct {
  size_t steps;
  size_t candidates;
  size_t max_beam;
} dpdp_solve_stats;

DPDP_API const char* dpdp_version(void);
DPDP_API const char* dpdp_last_error(void);
DPDP_API const char* dpdp_status_string(dpdp_status status);

DPDP_API dpdp_status dpdp_problem_parse(const char* text, dpdp_problem* out);
DPDP_API const char* dpdp_problem_name(dpdp_problem problem);
DPDP_API dpdp_status dpdp_policy_parse(const char* text, dpdp_policy* out);
DPDP_API const char* dpdp_policy_name(dpdp_policy policy);

/* Instances. For VRP `n` is the customer count; `max_window` is used by
 * TSPTW only. */
DPDP_API dpdp_status dpdp_instance_generate(dpdp_problem problem, int n,
                                            uint64_t seed, double max_window,
                                            dpdp_instance** out);
DPDP_API dpdp_status dpdp_instance_read(const char* path, dpdp_instance** out);
DPDP_API dpdp_status dpdp_instance_parse(const char* json, dpdp_instance** out);
DPDP_API dpdp_status dpdp_instance_write(const dpdp_instance* instance,
                                         const char* path);
DPDP_API void dpdp_instance_free(dpdp_instance* instance);
DPDP_API dpdp_problem dpdp_instance_problem(const dpdp_instance* instance);
/* Node count, depot included. */
DPDP_API size_t dpdp_instance_size(const dpdp_instance* instance);
/* 0 for problems without capacity. */
DPDP_API double dpdp_instance_capacity(const dpdp_instance* instance);
DPDP_API dpdp_status dpdp_instance_cost(const dpdp_instance* instance,
                                        size_t i, size_t j, double* out);

/* Heatmaps. */
DPDP_API dpdp_status dpdp_heatmap_read(const char* path, size_t expected_n,
                                       dpdp_heatmap** out);
DPDP_API dpdp_status dpdp_heatmap_from_costs(const dpdp_instance* instance,
                                             int invert, dpdp_heatmap** out);
DPDP_API dpdp_status dpdp_heatmap_write(const dpdp_heatmap* heatmap,
                                        const char* path);
DPDP_API void dpdp_heatmap_free(dpdp_heatmap* heatmap);
DPDP_API size_t dpdp_heatmap_size(const dpdp_heatmap* heatmap);
DPDP_API double dpdp_heatmap_at(const dpdp_heatmap* heatmap, size_t i,
                                size_t j);

/* Solving. `heatmap` may be NULL, in which case the cost heatmap is used.
 * A run that finds no solution still returns DPDP_OK; check
 * dpdp_solution_found(). */
DPDP_API void dpdp_solver_config_init(dpdp_solver_config* config);
DPDP_API dpdp_status dpdp_solve(const dpdp_instance* instance,
                                const dpdp_heatmap* heatmap,
                                const dpdp_solver_config* config,
                                dpdp_solution** out);

/* Exact oracles. Fail with DPDP_ERR_LIMIT above their size caps. */
DPDP_API dpdp_status dpdp_oracle_brute_force(const dpdp_instance* instance,
                                             dpdp_solution** out);
DPDP_API dpdp_status dpdp_oracle_exact_dp(const dpdp_instance* instance,
                                          dpdp_solution** out);

DPDP_API void dpdp_solution_free(dpdp_solution* solution);
DPDP_API int dpdp_solution_found(const dpdp_solution* solution);
/* Result of re-simulating the actions, including graph membership. */
DPDP_API int dpdp_solution_feasible(const dpdp_solution* solution);
DPDP_API double dpdp_solution_cost(const dpdp_solution* solution);
/* Step at which the beam emptied, -1 otherwise. */
DPDP_API int dpdp_solution_dead_step(const dpdp_solution* solution);
/* Oracle search nodes, or expanded candidates for dpdp_solve. */
DPDP_API uint64_t dpdp_solution_nodes_searched(const dpdp_solution* solution);
DPDP_API void dpdp_solution_stats(const dpdp_solution* solution,
                                  dpdp_solve_stats* out);
DPDP_API const int* dpdp_solution_actions(const dpdp_solution* solution,
                                          size_t* count);
DPDP_API size_t dpdp_solution_num_routes(const dpdp_solution* solution);
DPDP_API const int* dpdp_solution_route(const dpdp_solution* solution,
                                        size_t index, size_t* length);

/* Re-simulates `actions`. With a non-NULL `config` the graph built from
 * `heatmap` and `config` is checked as well. `*ok` is 0 for an infeasible
 * sequence and dpdp_last_error() then names the violation. */
DPDP_API dpdp_status dpdp_check_actions(const dpdp_instance* instance,
                                        const dpdp_heatmap* heatmap,
                                        const dpdp_solver_config* config,
                                        const int* actions, size_t count,
                                        int* ok, double* cost);

#ifdef __cplusplus
}
#endif

#endif /* DPDP_DPDP_H_ */
