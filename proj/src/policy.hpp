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

// Heat + potential scoring policy.
//
// A partial solution is ranked by score = heat + potential, where heat sums
// the heatmap values of the edges taken so far and potential estimates the
// heat still to be collected. Node i carries a remaining potential
//
//   p(i) = w_i * sum_{j not visited} h_ji / Z_i,     Z_i = sum_k h_ki,
//
// and the total potential counts the start node plus every unvisited node.
// Remaining potentials depend only on the visited set, so they are updated in
// O(n) per retained solution and a candidate's total is derived in O(1).

#ifndef DPDP_POLICY_HPP_
#define DPDP_POLICY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "heatmap.hpp"
#include "instance.hpp"
#include "visited_set.hpp"

namespace dpdp {

enum class PolicyKind {
  kHeatPotential,      // supplied heatmap, heat + potential
  kHeat,               // supplied heatmap, heat only
  kCostHeatPotential,  // cost heuristic heatmap, heat + potential
  kCostHeat,           // cost heuristic heatmap, heat only
  kCost,               // rank by -cost (classic restricted DP)
};

std::string_view ToString(PolicyKind kind);
// Accepts the CLI spellings: heat-potential, heat, cost-heat-potential,
// cost-heat, cost.
PolicyKind ParsePolicyKind(std::string_view text);
bool UsesPotential(PolicyKind kind);
bool UsesCostHeat(PolicyKind kind);

class PolicyTables {
 public:
  // `heat` is used as given (callers symmetrize for TSP and VRP). With
  // `with_potential` false every w_i is 0, which turns heat + potential into
  // the heat-only policy.
  PolicyTables(const Heatmap& heat, const CostMatrix& costs, ProblemKind kind,
               bool with_potential = true);

  std::size_t size() const { return n_; }
  ProblemKind kind() const { return kind_; }
  bool has_potential() const { return with_potential_; }

  double heat(std::size_t i, std::size_t j) const { return heat_[i * n_ + j]; }
  double weight(std::size_t i) const { return weight_[i]; }
  double incoming_norm(std::size_t i) const { return incoming_norm_[i]; }
  // h_{i,dep} * h_{dep,j} * 0.1; zero matrix unless kind() == kVrp.
  double via_depot_heat(std::size_t i, std::size_t j) const {
    return via_depot_heat_.empty() ? 0.0 : via_depot_heat_[i * n_ + j];
  }
  // w_i * h_vi / Z_i: how much p(i) drops when v gets visited.
  double share(std::size_t v, std::size_t i) const { return share_[v * n_ + i]; }
  std::span<const double> share_row(std::size_t v) const {
    return {share_.data() + v * n_, n_};
  }
  double share_total(std::size_t v) const { return share_total_[v]; }

 private:
  std::size_t n_;
  ProblemKind kind_;
  bool with_potential_;
  std::vector<double> heat_;
  std::vector<double> weight_;
  std::vector<double> incoming_norm_;
  std::vector<double> via_depot_heat_;
  std::vector<double> share_;
  std::vector<double> share_total_;
};

// Flat-buffer primitives used by the beam. `node_potential` holds p(i) for
// every node; `exhausted[v]` holds sum over visited non-start i of share(v, i).

// Fills both buffers for `visited` and returns the total potential.
double InitPotential(const PolicyTables& tables,
                     std::span<const std::uint64_t> visited,
                     std::span<double> node_potential,
                     std::span<double> exhausted);

// Total potential after visiting v (v must be unvisited and not the start).
inline double PotentialAfterVisit(const PolicyTables& tables, double total,
                                  std::span<const double> node_potential,
                                  std::span<const double> exhausted,
                                  std::size_t v) {
  return total - node_potential[v] - (tables.share_total(v) - exhausted[v]);
}

// Updates both buffers in place for a visit to v.
void ApplyVisit(const PolicyTables& tables, std::size_t v,
                std::span<double> node_potential, std::span<double> exhausted);

// Value type over the same bookkeeping, for callers outside the beam.
class PotentialState {
 public:
  static PotentialState Initial(const PolicyTables& tables,
                                const VisitedSet& visited);

  // Copy-on-expand: returns the state after visiting v.
  PotentialState Visit(const PolicyTables& tables, std::size_t v) const;

  double node(std::size_t i) const { return node_potential_[i]; }
  double total() const { return total_; }
  const VisitedSet& visited() const { return visited_; }

 private:
  explicit PotentialState(std::size_t n)
      : visited_(n), node_potential_(n, 0.0), exhausted_(n, 0.0) {}

  VisitedSet visited_;
  std::vector<double> node_potential_;
  std::vector<double> exhausted_;
  double total_ = 0.0;
};

inline double Score(double heat, double potential) { return heat + potential; }

}  // namespace dpdp

#endif  // DPDP_POLICY_HPP_
