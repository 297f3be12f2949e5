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

#include "policy.hpp"

#include <algorithm>
#include <string>

namespace dpdp {

std::string_view ToString(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kHeatPotential:
      return "heat-potential";
    case PolicyKind::kHeat:
      return "heat";
    case PolicyKind::kCostHeatPotential:
      return "cost-heat-potential";
    case PolicyKind::kCostHeat:
      return "cost-heat";
    case PolicyKind::kCost:
      return "cost";
  }
  return "?";
}

PolicyKind ParsePolicyKind(std::string_view text) {
  for (PolicyKind kind :
       {PolicyKind::kHeatPotential, PolicyKind::kHeat,
        PolicyKind::kCostHeatPotential, PolicyKind::kCostHeat,
        PolicyKind::kCost}) {
    if (text == ToString(kind)) return kind;
  }
  throw ValidationError("unknown policy '" + std::string(text) + "'");
}

bool UsesPotential(PolicyKind kind) {
  return kind == PolicyKind::kHeatPotential ||
         kind == PolicyKind::kCostHeatPotential;
}

bool UsesCostHeat(PolicyKind kind) {
  return kind == PolicyKind::kCostHeatPotential ||
         kind == PolicyKind::kCostHeat || kind == PolicyKind::kCost;
}

PolicyTables::PolicyTables(const Heatmap& heat, const CostMatrix& costs,
                           ProblemKind kind, bool with_potential)
    : n_(heat.size()),
      kind_(kind),
      with_potential_(with_potential),
      heat_(heat.values().begin(), heat.values().end()),
      weight_(n_, 0.0),
      incoming_norm_(n_, 0.0),
      share_(n_ * n_, 0.0),
      share_total_(n_, 0.0) {
  if (costs.size() != n_) {
    throw ValidationError("heatmap and cost matrix sizes differ");
  }
  double max_start_cost = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    max_start_cost = std::max(max_start_cost, costs(j, kDepot));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double max_in = 0.0;
    double norm = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      max_in = std::max(max_in, heat_[k * n_ + i]);
      norm += heat_[k * n_ + i];
    }
    incoming_norm_[i] = norm;
    if (with_potential_) {
      const double rel =
          max_start_cost > 0.0 ? costs(i, kDepot) / max_start_cost : 0.0;
      weight_[i] = max_in * (1.0 - 0.1 * (rel - 0.5));
    }
  }
  for (std::size_t v = 0; v < n_; ++v) {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double z = incoming_norm_[i];
      const double s = z > 0.0 ? weight_[i] * heat_[v * n_ + i] / z : 0.0;
      share_[v * n_ + i] = s;
      total += s;
    }
    share_total_[v] = total;
  }
  if (kind_ == ProblemKind::kVrp) {
    via_depot_heat_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        via_depot_heat_[i * n_ + j] =
            heat_[i * n_ + kDepot] * heat_[kDepot * n_ + j] * 0.1;
      }
    }
  }
}

double InitPotential(const PolicyTables& tables,
                     std::span<const std::uint64_t> visited,
                     std::span<double> node_potential,
                     std::span<double> exhausted) {
  const std::size_t n = tables.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = tables.incoming_norm(i);
    double remaining = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!TestBit(visited, j)) remaining += tables.heat(j, i);
    }
    node_potential[i] = z > 0.0 ? tables.weight(i) * remaining / z : 0.0;
    if (i == kDepot || !TestBit(visited, i)) total += node_potential[i];
  }
  for (std::size_t v = 0; v < n; ++v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != kDepot && TestBit(visited, i)) sum += tables.share(v, i);
    }
    exhausted[v] = sum;
  }
  return total;
}

void ApplyVisit(const PolicyTables& tables, std::size_t v,
                std::span<double> node_potential, std::span<double> exhausted) {
  const std::size_t n = tables.size();
  const auto row = tables.share_row(v);
  for (std::size_t i = 0; i < n; ++i) node_potential[i] -= row[i];
  if (v != kDepot) {
    for (std::size_t u = 0; u < n; ++u) exhausted[u] += tables.share(u, v);
  }
}

PotentialState PotentialState::Initial(const PolicyTables& tables,
                                       const VisitedSet& visited) {
  PotentialState state(tables.size());
  state.visited_ = visited;
  state.total_ = InitPotential(tables, visited.words(), state.node_potential_,
                               state.exhausted_);
  return state;
}

PotentialState PotentialState::Visit(const PolicyTables& tables,
                                     std::size_t v) const {
  if (visited_.contains(v)) {
    throw ValidationError("node " + std::to_string(v) + " already visited");
  }
  PotentialState next = *this;
  next.total_ = v == kDepot ? total_ - (tables.share_total(v) - exhausted_[v])
                            : PotentialAfterVisit(tables, total_,
                                                  node_potential_, exhausted_, v);
  ApplyVisit(tables, v, next.node_potential_, next.exhausted_);
  next.visited_.insert(v);
  return next;
}

}  // namespace dpdp
