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

// Action encoding, route decoding and independent feasibility checking.
//
// TSP / TSPTW: one action per step, the next node; the last action is 0
// (return to start). VRP with n nodes: action a < n moves directly to a,
// a >= n moves to a - n through the depot, and the terminal action 0 returns
// to the depot. The first VRP action is always a via-depot move.

#ifndef DPDP_SOLUTION_HPP_
#define DPDP_SOLUTION_HPP_

#include <span>
#include <string>
#include <vector>

#include "heatmap.hpp"
#include "instance.hpp"

namespace dpdp {

using Route = std::vector<int>;  // starts and ends at node 0

struct Solution {
  std::vector<int> actions;
  std::vector<Route> routes;
  double cost = 0.0;
  bool feasible = false;
};

// Throws ValidationError on an action outside the encoding range.
std::vector<Route> DecodeRoutes(ProblemKind kind, std::size_t n,
                                std::span<const int> actions);
std::vector<int> EncodeActions(ProblemKind kind, std::size_t n,
                               std::span<const Route> routes);

struct CheckResult {
  bool ok = false;
  double cost = 0.0;  // recomputed edge sum along the decoded routes
  std::string error;  // first violation found
};

// Re-simulates `actions` from scratch: every non-depot node exactly once,
// capacity per route, time windows with waiting, and (when `graph` is given)
// membership of every traversed edge.
CheckResult CheckSolution(const Instance& instance,
                          std::span<const int> actions,
                          const SparseGraph* graph = nullptr);

// Builds a Solution from actions, filling routes, cost and feasibility.
Solution MakeSolution(const Instance& instance, std::vector<int> actions,
                      const SparseGraph* graph = nullptr);

}  // namespace dpdp

#endif  // DPDP_SOLUTION_HPP_
