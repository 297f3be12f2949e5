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

#include "oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace dpdp {
namespace {

void CheckCap(std::size_t value, int cap, const char* what) {
  if (value > static_cast<std::size_t>(cap)) {
    throw LimitError(std::string(what) + " is limited to " +
                     std::to_string(cap) + ", got " + std::to_string(value));
  }
}

// Fills cost and routes from winning actions.
OracleResult Finish(const Instance& instance, std::vector<int> actions,
                    std::uint64_t searched) {
  OracleResult r;
  r.nodes_searched = searched;
  const CheckResult check = CheckSolution(instance, actions);
  if (!check.ok) {
    throw InternalError("oracle produced an infeasible solution: " + check.error);
  }
  r.optimal_cost = check.cost;
  r.optimal_routes = DecodeRoutes(instance.kind(), instance.size(), actions);
  r.actions = std::move(actions);
  return r;
}

OracleResult Infeasible(std::uint64_t searched) {
  OracleResult r;
  r.nodes_searched = searched;
  return r;
}

// Depth-first enumeration of tours in lexicographic order. Time windows
// prune a prefix as soon as a node is reached late.
class TourSearch {
 public:
  explicit TourSearch(const Instance& instance)
      : instance_(instance),
        c_(instance.costs()),
        n_(static_cast<int>(instance.size())),
        used_(instance.size(), false),
        windows_(instance.kind() == ProblemKind::kTsptw) {}

  OracleResult Run() {
    path_.clear();
    Extend(kDepot, 0.0, 0.0);
    if (best_.empty()) return Infeasible(searched_);
    return Finish(instance_, best_, searched_);
  }

 private:
  void Extend(int cur, double cost, double time) {
    ++searched_;
    if (static_cast<int>(path_.size()) == n_ - 1) {
      const double total = cost + c_(cur, kDepot);
      if (windows_ && time + c_(cur, kDepot) > instance_.time_windows()[kDepot].close) {
        return;
      }
      if (best_.empty() || total < best_cost_) {
        best_cost_ = total;
        best_ = path_;
        best_.push_back(kDepot);
      }
      return;
    }
    for (int j = 1; j < n_; ++j) {
      if (used_[j]) continue;
      double next_time = 0.0;
      if (windows_) {
        const TimeWindow& w = instance_.time_windows()[j];
        const double arrival = time + c_(cur, j);
        if (arrival > w.close) continue;
        next_time = std::max(arrival, w.open);
      }
      used_[j] = true;
      path_.push_back(j);
      Extend(j, cost + c_(cur, j), next_time);
      path_.pop_back();
      used_[j] = false;
    }
  }

  const Instance& instance_;
  const CostMatrix& c_;
  int n_;
  std::vector<bool> used_;
  bool windows_;
  std::vector<int> path_;
  std::vector<int> best_;
  double best_cost_ = 0.0;
  std::uint64_t searched_ = 0;
};

OracleResult BruteForceVrp(const Instance& instance) {
  const CostMatrix& c = instance.costs();
  const int m = static_cast<int>(instance.size()) - 1;
  const std::uint32_t full = (1u << m) - 1;
  std::uint64_t searched = 0;

  // Best single route per customer subset, by enumerating orderings.
  std::vector<double> route_cost(full + 1, kInf);
  std::vector<std::vector<int>> route_order(full + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double load = 0.0;
    std::vector<int> nodes;
    for (int k = 0; k < m; ++k) {
      if (mask >> k & 1u) {
        nodes.push_back(k + 1);
        load += instance.demands()[k + 1];
      }
    }
    if (load > instance.capacity()) continue;
    do {
      ++searched;
      double cost = c(kDepot, nodes.front());
      for (std::size_t k = 1; k < nodes.size(); ++k) cost += c(nodes[k - 1], nodes[k]);
      cost += c(nodes.back(), kDepot);
      if (cost < route_cost[mask]) {
        route_cost[mask] = cost;
        route_order[mask] = nodes;
      }
    } while (std::next_permutation(nodes.begin(), nodes.end()));
  }

  // Set partitions: the lowest unassigned customer opens the next route.
  double best_cost = kInf;
  std::vector<int> best_actions;
  std::vector<std::uint32_t> chosen;
  auto encode = [&]() {
    std::vector<std::uint32_t> order = chosen;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return route_order[a] < route_order[b];
    });
    std::vector<Route> routes;
    for (std::uint32_t sub : order) {
      Route r{kDepot};
      r.insert(r.end(), route_order[sub].begin(), route_order[sub].end());
      r.push_back(kDepot);
      routes.push_back(std::move(r));
    }
    return EncodeActions(ProblemKind::kVrp, instance.size(), routes);
  };
  auto recurse = [&](auto&& self, std::uint32_t remaining, double cost) -> void {
    ++searched;
    if (remaining == 0) {
      if (cost < best_cost) {
        best_cost = cost;
        best_actions = encode();
      } else if (cost == best_cost) {
        auto actions = encode();
        if (actions < best_actions) best_actions = std::move(actions);
      }
      return;
    }
    const std::uint32_t low = remaining & (~remaining + 1);
    const std::uint32_t rest = remaining ^ low;
    // Every subset of `rest`, joined with `low`.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t route = sub | low;
      if (route_cost[route] < kInf) {
        chosen.push_back(route);
        self(self, remaining ^ route, cost + route_cost[route]);
        chosen.pop_back();
      }
      if (sub == 0) break;
    }
  };
  recurse(recurse, full, 0.0);
  if (best_actions.empty()) return Infeasible(searched);
  return Finish(instance, std::move(best_actions), searched);
}

// One DP label; `prev` indexes the label store, -1 at the first action.
struct Label {
  double cost;
  double resource;
  std::int32_t prev;
  std::int32_t action;
};

// Removes dominated labels from `ids`. `maximize` selects whether a larger
// resource is better.
void KeepFront(std::vector<std::int32_t>& ids, const std::vector<Label>& store,
               bool maximize) {
  std::sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
    const Label& la = store[a];
    const Label& lb = store[b];
    if (la.cost != lb.cost) return la.cost < lb.cost;
    if (la.resource != lb.resource) {
      return maximize ? la.resource > lb.resource : la.resource < lb.resource;
    }
    return a < b;
  });
  std::vector<std::int32_t> kept;
  for (std::int32_t id : ids) {
    if (kept.empty()) {
      kept.push_back(id);
      continue;
    }
    const double best = store[kept.back()].resource;
    const double r = store[id].resource;
    if (maximize ? r > best : r < best) kept.push_back(id);
  }
  ids = std::move(kept);
}

std::vector<int> Unwind(const std::vector<Label>& store, std::int32_t id,
                        int final_action) {
  std::vector<int> actions{final_action};
  for (; id >= 0; id = store[id].prev) actions.push_back(store[id].action);
  std::reverse(actions.begin(), actions.end());
  return actions;
}

OracleResult HeldKarp(const Instance& instance) {
  const CostMatrix& c = instance.costs();
  const int m = static_cast<int>(instance.size()) - 1;
  const std::uint32_t full = (1u << m) - 1;
  const std::size_t states = (std::size_t{full} + 1) * m;
  std::vector<double> best(states, kInf);
  std::vector<std::int32_t> prev(states, -1);
  auto index = [m](std::uint32_t mask, int k) { return std::size_t{mask} * m + k; };
  for (int k = 0; k < m; ++k) best[index(1u << k, k)] = c(kDepot, k + 1);
  std::uint64_t searched = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int k = 0; k < m; ++k) {
      const double here = best[index(mask, k)];
      if (!(mask >> k & 1u) || here == kInf) continue;
      for (int j = 0; j < m; ++j) {
        if (mask >> j & 1u) continue;
        ++searched;
        const std::size_t to = index(mask | 1u << j, j);
        const double cost = here + c(k + 1, j + 1);
        if (cost < best[to]) {
          best[to] = cost;
          prev[to] = k;
        }
      }
    }
  }
  int last = 0;
  double total = kInf;
  for (int k = 0; k < m; ++k) {
    const double cost = best[index(full, k)] + c(k + 1, kDepot);
    if (cost < total) {
      total = cost;
      last = k;
    }
  }
  std::vector<int> actions{kDepot};
  std::uint32_t mask = full;
  for (int k = last; k >= 0;) {
    actions.push_back(k + 1);
    const int p = prev[index(mask, k)];
    mask ^= 1u << k;
    k = p;
  }
  std::reverse(actions.begin(), actions.end());
  return Finish(instance, std::move(actions), searched);
}

OracleResult LabelDp(const Instance& instance) {
  const bool vrp = instance.kind() == ProblemKind::kVrp;
  const CostMatrix& c = instance.costs();
  const int n = static_cast<int>(instance.size());
  const int m = n - 1;
  const std::uint32_t full = (1u << m) - 1;
  std::vector<Label> store;
  std::vector<std::vector<std::int32_t>> state((std::size_t{full} + 1) * m);
  std::vector<std::size_t> pruned_size(state.size(), 0);
  auto index = [m](std::uint32_t mask, int k) { return std::size_t{mask} * m + k; };

  auto add = [&](std::uint32_t mask, int k, Label label) {
    auto& ids = state[index(mask, k)];
    store.push_back(label);
    ids.push_back(static_cast<std::int32_t>(store.size() - 1));
    auto& mark = pruned_size[index(mask, k)];
    if (ids.size() > 2 * mark + 16) {
      KeepFront(ids, store, vrp);
      mark = ids.size();
    }
  };

  // Moves from `cur` (label `from`, -1 at the start) to customer j.
  auto expand = [&](std::uint32_t mask, int cur, std::int32_t from,
                    double cost, double resource) {
    for (int k = 0; k < m; ++k) {
      if (mask >> k & 1u) continue;
      const int j = k + 1;
      const std::uint32_t next = mask | 1u << k;
      if (vrp) {
        const double d = instance.demands()[j];
        if (cur != kDepot && d <= resource) {
          add(next, k, {cost + c(cur, j), resource - d, from, j});
        }
        double via = cost + c(cur, kDepot);
        via += c(kDepot, j);
        add(next, k, {via, instance.capacity() - d, from, j + n});
      } else {
        const TimeWindow& w = instance.time_windows()[j];
        const double arrival = resource + c(cur, j);
        if (arrival > w.close) continue;
        add(next, k, {cost + c(cur, j), std::max(arrival, w.open), from, j});
      }
    }
  };

  expand(0, kDepot, -1, 0.0, vrp ? instance.capacity() : 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int k = 0; k < m; ++k) {
      auto& ids = state[index(mask, k)];
      if (ids.empty()) continue;
      KeepFront(ids, store, vrp);
      if (mask == full) continue;
      for (std::int32_t id : ids) {
        const Label label = store[id];
        expand(mask, k + 1, id, label.cost, label.resource);
      }
    }
  }

  std::int32_t winner = -1;
  double total = kInf;
  for (int k = 0; k < m; ++k) {
    for (std::int32_t id : state[index(full, k)]) {
      const Label& label = store[id];
      if (!vrp && label.resource + c(k + 1, kDepot) >
                      instance.time_windows()[kDepot].close) {
        continue;
      }
      const double cost = label.cost + c(k + 1, kDepot);
      if (cost < total) {
        total = cost;
        winner = id;
      }
    }
  }
  if (winner < 0) return Infeasible(store.size());
  return Finish(instance, Unwind(store, winner, kDepot), store.size());
}

}  // namespace

OracleResult BruteForce(const Instance& instance, const OracleLimits& limits) {
  switch (instance.kind()) {
    case ProblemKind::kVrp:
      CheckCap(instance.size() - 1, limits.brute_force_vrp,
               "VRP brute force customer count");
      return BruteForceVrp(instance);
    case ProblemKind::kTsp:
    case ProblemKind::kTsptw:
      CheckCap(instance.size(), limits.brute_force_tsp, "brute force node count");
      return TourSearch(instance).Run();
  }
  throw InternalError("unknown problem kind");
}

OracleResult ExactDp(const Instance& instance, const OracleLimits& limits) {
  switch (instance.kind()) {
    case ProblemKind::kTsp:
      CheckCap(instance.size(), limits.exact_dp_tsp, "exact DP node count");
      return HeldKarp(instance);
    case ProblemKind::kVrp:
      CheckCap(instance.size() - 1, limits.exact_dp_constrained,
               "exact DP customer count");
      return LabelDp(instance);
    case ProblemKind::kTsptw:
      CheckCap(instance.size(), limits.exact_dp_constrained,
               "exact DP node count");
      return LabelDp(instance);
  }
  throw InternalError("unknown problem kind");
}

}  // namespace dpdp
