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

// Beam-restricted dynamic programming over routing state spaces.
//
// Each step expands every beam entry, removes expansions dominated inside
// their DP state (visited set, current node) and keeps the B best survivors
// under the policy score. Parents are grouped by visited set first: two
// expansions share a DP state only if their parents share a visited set, so
// dominance is resolved one group at a time.
//
// Every ranking and tie uses one total order: score descending, then cost,
// current node, parent slot and action ascending.

#ifndef DPDP_DP_HPP_
#define DPDP_DP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "heatmap.hpp"
#include "instance.hpp"
#include "policy.hpp"
#include "solution.hpp"
#include "visited_set.hpp"

namespace dpdp {

struct SolverConfig {
  std::size_t beam_size = 1;
  PolicyKind policy = PolicyKind::kCostHeatPotential;
  // false gives plain beam search over the solution space.
  bool dominance = true;
  // Drop candidates scoring below the current B-th best before dominance
  // checks. Faster, but may change results when the score disagrees with
  // dominance.
  bool score_bound_prefilter = false;
};

// One expansion of a beam entry.
struct Candidate {
  double score = 0.0;
  double cost = 0.0;
  // Remaining capacity (VRP), time (TSPTW), unused for TSP.
  double resource = 0.0;
  double heat = 0.0;
  double potential = 0.0;
  std::int32_t node = 0;
  std::int32_t action = 0;
  std::int32_t parent = 0;
};

inline bool RanksBefore(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.node != b.node) return a.node < b.node;
  if (a.parent != b.parent) return a.parent < b.parent;
  return a.action < b.action;
}

// Materialised view of one beam slot.
struct BeamEntry {
  double cost = 0.0;
  int current = 0;
  VisitedSet visited{0};
  double remaining_capacity = 0.0;
  double time = 0.0;
  double heat = 0.0;
  double potential = 0.0;
  double score = 0.0;
  std::int32_t parent_slot = -1;
};

// Struct-of-arrays beam. Per-node potential buffers are only kept when the
// policy has a potential term.
struct Beam {
  Beam(std::size_t nodes, bool with_potential);

  std::size_t size() const { return cost.size(); }
  std::size_t nodes() const { return n; }
  std::size_t words() const { return w; }

  std::span<const std::uint64_t> visited(std::size_t slot) const {
    return {visited_words.data() + slot * w, w};
  }
  std::span<std::uint64_t> visited(std::size_t slot) {
    return {visited_words.data() + slot * w, w};
  }
  std::span<const double> node_potentials(std::size_t slot) const {
    return {node_potential.data() + slot * n, n};
  }
  std::span<const double> exhausted_shares(std::size_t slot) const {
    return {exhausted.data() + slot * n, n};
  }

  void Resize(std::size_t m);
  BeamEntry Entry(std::size_t slot, ProblemKind kind) const;

  std::size_t n;
  std::size_t w;
  bool with_potential;
  std::vector<double> cost;
  std::vector<double> resource;
  std::vector<double> heat;
  std::vector<double> potential;
  std::vector<double> score;
  std::vector<std::int32_t> current;
  std::vector<std::int32_t> parent;
  std::vector<std::uint64_t> visited_words;
  std::vector<double> node_potential;
  std::vector<double> exhausted;
};

// The single empty solution every solve starts from.
Beam InitBeam(const Instance& instance, const PolicyTables& tables,
              const SolverConfig& config);

// Beam slots permuted so equal visited sets are contiguous (lexicographic on
// the packed words); within a group slots follow the total order.
struct Grouping {
  std::vector<std::int32_t> order;
  std::vector<std::size_t> starts;  // group g is order[starts[g], starts[g+1])

  std::size_t groups() const { return starts.empty() ? 0 : starts.size() - 1; }
  std::span<const std::int32_t> group(std::size_t g) const {
    return {order.data() + starts[g], starts[g + 1] - starts[g]};
  }
};

Grouping GroupByVisited(const Beam& beam);

// Streaming top-B under the total order.
class TopBSelector {
 public:
  explicit TopBSelector(std::size_t capacity) : capacity_(capacity) {}

  void Offer(const Candidate& c);
  // Score of the worst kept candidate once B are held, -inf before.
  double Bound() const;
  std::size_t size() const { return heap_.size(); }
  // Kept candidates sorted by the total order; empties the selector.
  std::vector<Candidate> Take();

 private:
  struct Worse {
    bool operator()(const Candidate& a, const Candidate& b) const {
      return RanksBefore(a, b);
    }
  };
  std::size_t capacity_;
  std::priority_queue<Candidate, std::vector<Candidate>, Worse> heap_;
};

// A finished solution: the last action applied to a slot of the final beam.
struct Completion {
  Candidate last;
};

// Per-problem expansion and dominance pruning.
class Expander {
 public:
  Expander(const Instance& instance, const PolicyTables& tables,
           const SparseGraph& graph, const SolverConfig& config);

  // Appends the candidates of one visited-set group to `out`. With dominance
  // enabled only the non-dominated candidate(s) of every DP state remain.
  // Candidates scoring below `score_floor` are discarded before dominance.
  void ExpandGroup(const Beam& beam, std::span<const std::int32_t> group,
                   double score_floor, std::vector<Candidate>& out);

  // All candidates of the beam (no score floor).
  std::vector<Candidate> ExpandAll(const Beam& beam, const Grouping& grouping);

  // True when every node is visited and only the return to node 0 remains.
  bool IsFinal(const Beam& beam) const;

  // Best feasible return to node 0 over the final beam: lowest cost, ties by
  // the total order.
  std::optional<Completion> BestCompletion(const Beam& beam) const;

  // New beam from selected candidates (visited sets and potentials updated).
  Beam Materialize(const Beam& parents,
                   std::span<const Candidate> selected) const;

 private:
  void ExpandTsp(const Beam& beam, std::span<const std::int32_t> group,
                 double floor, std::vector<Candidate>& out);
  void ExpandVrp(const Beam& beam, std::span<const std::int32_t> group,
                 double floor, std::vector<Candidate>& out);
  void ExpandTsptw(const Beam& beam, std::span<const std::int32_t> group,
                   double floor, std::vector<Candidate>& out);

  // Potential of the group's children that visit `node`.
  double ChildPotential(const Beam& beam, std::int32_t slot, int node);
  double MakeScore(double cost, double heat, double potential) const;
  // Keeps the Pareto front of `raw` per target node. `maximize` selects the
  // direction of the resource (remaining capacity vs time).
  void ParetoByNode(std::vector<Candidate>& raw, bool maximize,
                    std::vector<Candidate>& out) const;

  const Instance& instance_;
  const PolicyTables& tables_;
  const SparseGraph& graph_;
  SolverConfig config_;
  std::size_t n_;
  // Per-node scratch, valid while its stamp equals stamp_ (one group).
  std::uint32_t stamp_ = 0;
  std::vector<double> potential_cache_;
  std::vector<std::uint32_t> potential_stamp_;
  std::vector<std::int32_t> best_index_;
  std::vector<std::uint32_t> best_stamp_;
  // Via-depot cost (VRP) or latest departure (TSPTW) per target node.
  std::vector<double> aux_;
  std::vector<std::uint32_t> aux_stamp_;
  std::vector<std::int32_t> tied_;
  std::vector<Candidate> raw_;
};

// Pareto pruning of candidates that share a DP state, ordered by cost then
// resource. Exact duplicates keep the one ranked first by the total order.
void ParetoPrune(std::vector<Candidate>& state, bool maximize,
                 std::vector<Candidate>& out);

struct TraceStep {
  std::int32_t parent = 0;
  std::int32_t action = 0;
};

// Per-step (parent slot, action) records of every retained entry.
class Trace {
 public:
  void Push(std::vector<TraceStep> step) { steps_.push_back(std::move(step)); }
  std::size_t steps() const { return steps_.size(); }
  const std::vector<TraceStep>& step(std::size_t t) const { return steps_[t]; }

  // Actions leading to slot `final_slot` of the last recorded beam, followed
  // by `final_action`. Throws InternalError on an invalid parent index.
  std::vector<int> Backtrack(std::int32_t final_slot, int final_action) const;

 private:
  std::vector<std::vector<TraceStep>> steps_;
};

struct SolveStats {
  std::size_t steps = 0;
  std::size_t candidates = 0;
  std::size_t max_beam = 0;
};

struct SolveResult {
  // Set iff a completed solution was found.
  std::optional<Solution> solution;
  // Step at which no expansion or completion survived, -1 on success.
  int dead_step = -1;
  SolveStats stats;
};

SolveResult Solve(const Instance& instance, const PolicyTables& tables,
                  const SparseGraph& graph, const SolverConfig& config);

// Graph construction used by the high-level solve.
struct Sparsification {
  enum class Mode { kThreshold, kKnn, kComplete };
  Mode mode = Mode::kThreshold;
  double threshold = 1e-5;
  int knn = 0;
};

struct SolveOptions {
  SolverConfig solver;
  Sparsification sparsify;
  bool invert_cost_heat = false;
};

// Heatmap as the policy sees it: the cost heuristic for cost-based policies
// or when `supplied` is null, otherwise `supplied`; symmetrized for TSP and
// VRP.
Heatmap PolicyHeatmap(const Instance& instance, const Heatmap* supplied,
                      PolicyKind policy, bool invert_cost_heat);
PolicyTables MakePolicyTables(const Instance& instance, const Heatmap* supplied,
                              PolicyKind policy, bool invert_cost_heat);
// Thresholds the supplied heatmap when given, the cost heuristic otherwise.
// VRP graphs always get depot edges in both directions.
SparseGraph MakeGraph(const Instance& instance, const Heatmap* supplied,
                      const Sparsification& sparsify, bool invert_cost_heat);

SolveResult Solve(const Instance& instance, const Heatmap* supplied,
                  const SolveOptions& options);

}  // namespace dpdp

#endif  // DPDP_DP_HPP_
