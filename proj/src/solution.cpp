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

#include "solution.hpp"

#include <algorithm>
#include <utility>

namespace dpdp {
namespace {

CheckResult Fail(std::string message) {
  CheckResult r;
  r.error = std::move(message);
  return r;
}

}  // namespace

std::vector<Route> DecodeRoutes(ProblemKind kind, std::size_t n,
                                std::span<const int> actions) {
  const int nn = static_cast<int>(n);
  std::vector<Route> routes;
  if (kind != ProblemKind::kVrp) {
    Route route{kDepot};
    for (int a : actions) {
      if (a < 0 || a >= nn) {
        throw ValidationError("action " + std::to_string(a) + " out of range");
      }
      route.push_back(a);
    }
    routes.push_back(std::move(route));
    return routes;
  }
  for (int a : actions) {
    if (a < 0 || a >= 2 * nn || a == nn + kDepot) {
      throw ValidationError("action " + std::to_string(a) + " out of range");
    }
    if (a >= nn) {
      if (!routes.empty()) routes.back().push_back(kDepot);
      routes.push_back({kDepot, a - nn});
    } else if (a == kDepot) {
      if (!routes.empty()) routes.back().push_back(kDepot);
    } else {
      if (routes.empty()) routes.push_back({kDepot});
      routes.back().push_back(a);
    }
  }
  if (!routes.empty() && routes.back().back() != kDepot) {
    routes.back().push_back(kDepot);
  }
  return routes;
}

std::vector<int> EncodeActions(ProblemKind kind, std::size_t n,
                               std::span<const Route> routes) {
  const int nn = static_cast<int>(n);
  std::vector<int> actions;
  if (kind != ProblemKind::kVrp) {
    for (const Route& route : routes) {
      actions.insert(actions.end(), route.begin() + 1, route.end());
    }
    return actions;
  }
  for (const Route& route : routes) {
    bool first = true;
    for (int node : route) {
      if (node == kDepot) continue;
      actions.push_back(first ? node + nn : node);
      first = false;
    }
  }
  actions.push_back(kDepot);
  return actions;
}

CheckResult CheckSolution(const Instance& instance,
                          std::span<const int> actions,
                          const SparseGraph* graph) {
  const std::size_t n = instance.size();
  const int nn = static_cast<int>(n);
  const CostMatrix& c = instance.costs();
  std::vector<int> seen(n, 0);
  auto edge_ok = [&](int i, int j) {
    return graph == nullptr || i == j || graph->HasEdge(i, j);
  };
  auto edge_name = [](int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
  };

  if (instance.kind() != ProblemKind::kVrp) {
    if (actions.size() != n) {
      return Fail("expected " + std::to_string(n) + " actions, got " +
                  std::to_string(actions.size()));
    }
    double cost = 0.0;
    double time = 0.0;
    int current = kDepot;
    for (std::size_t t = 0; t < actions.size(); ++t) {
      const int a = actions[t];
      if (a < 0 || a >= nn) return Fail("action out of range");
      const bool last = t + 1 == actions.size();
      if (last != (a == kDepot)) {
        return Fail("node 0 must be the final action only");
      }
      if (!edge_ok(current, a)) return Fail("edge " + edge_name(current, a) + " not in graph");
      if (a != kDepot && seen[a]++) {
        return Fail("node " + std::to_string(a) + " visited twice");
      }
      cost += c(current, a);
      if (instance.kind() == ProblemKind::kTsptw) {
        const TimeWindow& w = instance.time_windows()[a];
        const double arrival = time + c(current, a);
        if (arrival > w.close) {
          return Fail("node " + std::to_string(a) + " reached at " +
                      std::to_string(arrival) + " after its window closes");
        }
        time = std::max(arrival, w.open);
      }
      current = a;
    }
    CheckResult r;
    r.ok = true;
    r.cost = cost;
    return r;
  }

  // VRP.
  if (actions.empty()) return Fail("no actions");
  double cost = 0.0;
  double remaining = instance.capacity();
  int current = kDepot;
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const int a = actions[t];
    const bool last = t + 1 == actions.size();
    if (a < 0 || a >= 2 * nn || a == nn) return Fail("action out of range");
    if (last) {
      if (a != kDepot) return Fail("final action must return to the depot");
      if (!edge_ok(current, kDepot)) return Fail("edge " + edge_name(current, kDepot) + " not in graph");
      cost += c(current, kDepot);
      break;
    }
    if (a == kDepot) return Fail("return to depot before all customers served");
    const bool via = a >= nn;
    const int node = via ? a - nn : a;
    if (t == 0 && !via) return Fail("first action must go via the depot");
    if (seen[node]++) {
      return Fail("node " + std::to_string(node) + " visited twice");
    }
    if (via) {
      if (!edge_ok(current, kDepot) || !edge_ok(kDepot, node)) {
        return Fail("via-depot move to " + std::to_string(node) +
                    " uses an edge outside the graph");
      }
      cost += c(current, kDepot);
      cost += c(kDepot, node);
      remaining = instance.capacity();
    } else {
      if (!edge_ok(current, node)) return Fail("edge " + edge_name(current, node) + " not in graph");
      cost += c(current, node);
    }
    const double demand = instance.demands()[node];
    if (demand > remaining) {
      return Fail("capacity exceeded at node " + std::to_string(node));
    }
    remaining -= demand;
    current = node;
  }
  for (int i = 1; i < nn; ++i) {
    if (seen[i] != 1) return Fail("node " + std::to_string(i) + " not visited");
  }
  CheckResult r;
  r.ok = true;
  r.cost = cost;
  return r;
}

Solution MakeSolution(const Instance& instance, std::vector<int> actions,
                      const SparseGraph* graph) {
  Solution s;
  const CheckResult check = CheckSolution(instance, actions, graph);
  s.routes = DecodeRoutes(instance.kind(), instance.size(), actions);
  s.actions = std::move(actions);
  s.cost = check.cost;
  s.feasible = check.ok;
  return s;
}

}  // namespace dpdp
