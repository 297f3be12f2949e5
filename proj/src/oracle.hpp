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

// Exact reference solvers for small instances. Both ignore sparse graphs and
// share no code with the beam engine.

#ifndef DPDP_ORACLE_HPP_
#define DPDP_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"

namespace dpdp {

struct OracleLimits {
  // Node counts (depot included) for TSP / TSPTW, customer counts for VRP.
  int brute_force_tsp = 11;
  int brute_force_vrp = 8;
  int exact_dp_tsp = 16;
  int exact_dp_constrained = 13;
};

struct OracleResult {
  // Empty when the instance has no feasible solution.
  std::optional<double> optimal_cost;
  std::vector<Route> optimal_routes;
  std::vector<int> actions;
  std::uint64_t nodes_searched = 0;

  bool feasible() const { return optimal_cost.has_value(); }
};

// Exhaustive enumeration: permutations for TSP / TSPTW, capacity-feasible
// set partitions with per-route optimal orderings for VRP. Exact cost ties go
// to the lexicographically smallest action encoding. Throws LimitError above
// the caps.
OracleResult BruteForce(const Instance& instance, const OracleLimits& limits = {});

// Forward DP over every (visited set, current node) state; Pareto fronts of
// (cost, remaining capacity) for VRP and (cost, time) for TSPTW.
OracleResult ExactDp(const Instance& instance, const OracleLimits& limits = {});

}  // namespace dpdp

#endif  // DPDP_ORACLE_HPP_
