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

#include "dp.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace dpdp {
namespace {

// Slack on the one-step time-window lookahead. Only ever admits more
// expansions; the window of the node actually entered is checked exactly.
constexpr double kLookaheadTolerance = 1e-9;

// Orders candidates of one DP state: cheaper first, then better resource,
// then the total order.
struct ParetoOrder {
  bool maximize;
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.resource != b.resource) {
      return maximize ? a.resource > b.resource : a.resource < b.resource;
    }
    return RanksBefore(a, b);
  }
};

// Appends the front of a cost/resource-sorted segment.
void ScanFront(std::span<const Candidate> sorted, bool maximize,
               std::vector<Candidate>& out) {
  if (sorted.empty()) return;
  double best = sorted.front().resource;
  out.push_back(sorted.front());
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double r = sorted[k].resource;
    if (maximize ? r > best : r < best) {
      best = r;
      out.push_back(sorted[k]);
    }
  }
}

}  // namespace

Beam::Beam(std::size_t nodes, bool potential)
    : n(nodes), w(WordsFor(nodes)), with_potential(potential) {}

void Beam::Resize(std::size_t m) {
  cost.resize(m);
  resource.resize(m);
  heat.resize(m);
  potential.resize(m);
  score.resize(m);
  current.resize(m);
  parent.resize(m);
  visited_words.resize(m * w);
  if (with_potential) {
    node_potential.resize(m * n);
    exhausted.resize(m * n);
  }
}

BeamEntry Beam::Entry(std::size_t slot, ProblemKind kind) const {
  BeamEntry e;
  e.cost = cost[slot];
  e.current = current[slot];
  e.visited = VisitedSet(n, visited(slot));
  if (kind == ProblemKind::kVrp) e.remaining_capacity = resource[slot];
  if (kind == ProblemKind::kTsptw) e.time = resource[slot];
  e.heat = heat[slot];
  e.potential = potential[slot];
  e.score = score[slot];
  e.parent_slot = parent[slot];
  return e;
}

Beam InitBeam(const Instance& instance, const PolicyTables& tables,
              const SolverConfig& config) {
  Beam beam(instance.size(), tables.has_potential());
  beam.Resize(1);
  beam.cost[0] = 0.0;
  beam.current[0] = kDepot;
  beam.parent[0] = -1;
  beam.heat[0] = 0.0;
  std::fill(beam.visited_words.begin(), beam.visited_words.end(), 0);
  switch (instance.kind()) {
    case ProblemKind::kTsp:
      SetBit(beam.visited(0), kDepot);
      beam.resource[0] = 0.0;
      break;
    case ProblemKind::kVrp:
      beam.resource[0] = instance.capacity();
      break;
    case ProblemKind::kTsptw:
      SetBit(beam.visited(0), kDepot);
      beam.resource[0] = 0.0;
      break;
  }
  beam.potential[0] =
      beam.with_potential
          ? InitPotential(tables, beam.visited(0),
                          {beam.node_potential.data(), beam.n},
                          {beam.exhausted.data(), beam.n})
          : 0.0;
  beam.score[0] = config.policy == PolicyKind::kCost
                      ? 0.0
                      : Score(beam.heat[0], beam.potential[0]);
  return beam;
}

Grouping GroupByVisited(const Beam& beam) {
  Grouping g;
  g.order.resize(beam.size());
  std::iota(g.order.begin(), g.order.end(), 0);
  std::sort(g.order.begin(), g.order.end(), [&](std::int32_t a, std::int32_t b) {
    const auto cmp = CompareWords(beam.visited(a), beam.visited(b));
    if (cmp != 0) return cmp < 0;
    if (beam.score[a] != beam.score[b]) return beam.score[a] > beam.score[b];
    if (beam.cost[a] != beam.cost[b]) return beam.cost[a] < beam.cost[b];
    if (beam.current[a] != beam.current[b]) return beam.current[a] < beam.current[b];
    return a < b;
  });
  for (std::size_t k = 0; k < g.order.size(); ++k) {
    if (k == 0 ||
        CompareWords(beam.visited(g.order[k - 1]), beam.visited(g.order[k])) != 0) {
      g.starts.push_back(k);
    }
  }
  g.starts.push_back(g.order.size());
  if (g.order.empty()) g.starts.clear();
  return g;
}

void TopBSelector::Offer(const Candidate& c) {
  if (capacity_ == 0) return;
  if (heap_.size() < capacity_) {
    heap_.push(c);
  } else if (RanksBefore(c, heap_.top())) {
    heap_.pop();
    heap_.push(c);
  }
}

double TopBSelector::Bound() const {
  return heap_.size() >= capacity_ && !heap_.empty() ? heap_.top().score : -kInf;
}

std::vector<Candidate> TopBSelector::Take() {
  std::vector<Candidate> out;
  out.reserve(heap_.size());
  while (!heap_.empty()) {
    out.push_back(heap_.top());
    heap_.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void ParetoPrune(std::vector<Candidate>& state, bool maximize,
                 std::vector<Candidate>& out) {
  std::sort(state.begin(), state.end(), ParetoOrder{maximize});
  ScanFront(state, maximize, out);
}

Expander::Expander(const Instance& instance, const PolicyTables& tables,
                   const SparseGraph& graph, const SolverConfig& config)
    : instance_(instance),
      tables_(tables),
      graph_(graph),
      config_(config),
      n_(instance.size()),
      potential_cache_(n_, 0.0),
      potential_stamp_(n_, 0),
      best_index_(n_, 0),
      best_stamp_(n_, 0),
      aux_(n_, 0.0),
      aux_stamp_(n_, 0) {
  if (tables.size() != n_ || graph.size() != n_) {
    throw ValidationError("policy tables, graph and instance sizes differ");
  }
}

double Expander::ChildPotential(const Beam& beam, std::int32_t slot, int node) {
  if (!beam.with_potential) return 0.0;
  if (potential_stamp_[node] != stamp_) {
    potential_stamp_[node] = stamp_;
    potential_cache_[node] =
        PotentialAfterVisit(tables_, beam.potential[slot],
                            beam.node_potentials(slot),
                            beam.exhausted_shares(slot), node);
  }
  return potential_cache_[node];
}

double Expander::MakeScore(double cost, double heat, double potential) const {
  return config_.policy == PolicyKind::kCost ? -cost : Score(heat, potential);
}

bool Expander::IsFinal(const Beam& beam) const {
  if (beam.size() == 0) return false;
  const std::size_t full = instance_.kind() == ProblemKind::kVrp ? n_ - 1 : n_;
  return PopCount(beam.visited(0)) == full;
}

void Expander::ExpandGroup(const Beam& beam, std::span<const std::int32_t> group,
                           double score_floor, std::vector<Candidate>& out) {
  if (group.empty()) return;
  ++stamp_;
  switch (instance_.kind()) {
    case ProblemKind::kTsp:
      ExpandTsp(beam, group, score_floor, out);
      break;
    case ProblemKind::kVrp:
      ExpandVrp(beam, group, score_floor, out);
      break;
    case ProblemKind::kTsptw:
      ExpandTsptw(beam, group, score_floor, out);
      break;
  }
}

std::vector<Candidate> Expander::ExpandAll(const Beam& beam,
                                           const Grouping& grouping) {
  std::vector<Candidate> out;
  for (std::size_t g = 0; g < grouping.groups(); ++g) {
    ExpandGroup(beam, grouping.group(g), -kInf, out);
  }
  return out;
}

void Expander::ExpandTsp(const Beam& beam, std::span<const std::int32_t> group,
                         double floor, std::vector<Candidate>& out) {
  const CostMatrix& c = instance_.costs();
  const std::int32_t first = group.front();
  const auto visited = beam.visited(first);
  for (std::int32_t slot : group) {
    const int cur = beam.current[slot];
    for (int j : graph_.out_edges(cur)) {
      if (TestBit(visited, j)) continue;
      Candidate cand;
      cand.cost = beam.cost[slot] + c(cur, j);
      cand.heat = beam.heat[slot] + tables_.heat(cur, j);
      cand.potential = ChildPotential(beam, first, j);
      cand.score = MakeScore(cand.cost, cand.heat, cand.potential);
      if (cand.score < floor) continue;
      cand.node = j;
      cand.action = j;
      cand.parent = slot;
      if (!config_.dominance) {
        out.push_back(cand);
        continue;
      }
      if (best_stamp_[j] != stamp_) {
        best_stamp_[j] = stamp_;
        best_index_[j] = static_cast<std::int32_t>(out.size());
        out.push_back(cand);
        continue;
      }
      Candidate& best = out[best_index_[j]];
      if (cand.cost < best.cost ||
          (cand.cost == best.cost && RanksBefore(cand, best))) {
        best = cand;
      }
    }
  }
}

void Expander::ExpandVrp(const Beam& beam, std::span<const std::int32_t> group,
                         double floor, std::vector<Candidate>& out) {
  const CostMatrix& c = instance_.costs();
  const std::vector<double>& demand = instance_.demands();
  const double capacity = instance_.capacity();
  const int n = static_cast<int>(n_);
  const std::int32_t first = group.front();
  const auto visited = beam.visited(first);
  const bool first_step = PopCount(visited) == 0;
  std::vector<Candidate>& sink = config_.dominance ? raw_ : out;
  raw_.clear();

  auto via = [&](std::int32_t slot, int j) {
    const int cur = beam.current[slot];
    Candidate cand;
    cand.cost = beam.cost[slot] + c(cur, kDepot);
    cand.cost += c(kDepot, j);
    cand.resource = capacity - demand[j];
    cand.heat = beam.heat[slot] + tables_.via_depot_heat(cur, j);
    cand.potential = ChildPotential(beam, first, j);
    cand.score = MakeScore(cand.cost, cand.heat, cand.potential);
    cand.node = j;
    cand.action = j + n;
    cand.parent = slot;
    return cand;
  };
  auto can_return = [&](int cur) {
    return cur == kDepot || graph_.HasEdge(cur, kDepot);
  };

  // Via-depot expansions. Under dominance only the parents with the cheapest
  // return to the depot can produce the single surviving via-depot
  // expansion of each DP state.
  if (config_.dominance) {
    double best_return = kInf;
    std::vector<std::int32_t>& tied = tied_;
    tied.clear();
    for (std::int32_t slot : group) {
      const int cur = beam.current[slot];
      if (!can_return(cur)) continue;
      const double r = beam.cost[slot] + c(cur, kDepot);
      if (r < best_return) {
        best_return = r;
        tied.assign(1, slot);
      } else if (r == best_return) {
        tied.push_back(slot);
      }
    }
    if (!tied.empty()) {
      for (int j : graph_.out_edges(kDepot)) {
        if (TestBit(visited, j)) continue;
        Candidate best = via(tied.front(), j);
        for (std::size_t k = 1; k < tied.size(); ++k) {
          const Candidate other = via(tied[k], j);
          if (other.cost < best.cost ||
              (other.cost == best.cost && RanksBefore(other, best))) {
            best = other;
          }
        }
        if (best.score < floor) continue;
        aux_stamp_[j] = stamp_;
        aux_[j] = best.cost;
        raw_.push_back(best);
      }
    }
  } else {
    for (std::int32_t slot : group) {
      if (!can_return(beam.current[slot])) continue;
      for (int j : graph_.out_edges(kDepot)) {
        if (TestBit(visited, j)) continue;
        const Candidate cand = via(slot, j);
        if (cand.score < floor) continue;
        out.push_back(cand);
      }
    }
  }

  if (!first_step) {
    for (std::int32_t slot : group) {
      const int cur = beam.current[slot];
      const double remaining = beam.resource[slot];
      for (int j : graph_.out_edges(cur)) {
        if (j == kDepot || TestBit(visited, j) || demand[j] > remaining) continue;
        Candidate cand;
        cand.cost = beam.cost[slot] + c(cur, j);
        // Direct expansions costing more than the via-depot expansion of the
        // same state are dominated by it.
        if (config_.dominance && aux_stamp_[j] == stamp_ && cand.cost > aux_[j]) {
          continue;
        }
        cand.resource = remaining - demand[j];
        cand.heat = beam.heat[slot] + tables_.heat(cur, j);
        cand.potential = ChildPotential(beam, first, j);
        cand.score = MakeScore(cand.cost, cand.heat, cand.potential);
        if (cand.score < floor) continue;
        cand.node = j;
        cand.action = j;
        cand.parent = slot;
        sink.push_back(cand);
      }
    }
  }
  if (config_.dominance) ParetoByNode(raw_, /*maximize=*/true, out);
}

void Expander::ExpandTsptw(const Beam& beam, std::span<const std::int32_t> group,
                           double floor, std::vector<Candidate>& out) {
  const CostMatrix& c = instance_.costs();
  const std::vector<TimeWindow>& windows = instance_.time_windows();
  const std::int32_t first = group.front();
  const auto visited = beam.visited(first);
  std::vector<Candidate>& sink = config_.dominance ? raw_ : out;
  raw_.clear();

  // Latest departure from j that still reaches every other unvisited node
  // directly within its window.
  auto latest_departure = [&](int j) {
    if (aux_stamp_[j] != stamp_) {
      aux_stamp_[j] = stamp_;
      double slack = kInf;
      for (std::size_t k = 0; k < n_; ++k) {
        if (static_cast<int>(k) == j || TestBit(visited, k)) continue;
        slack = std::min(slack, windows[k].close - c(j, k));
      }
      aux_[j] = slack;
    }
    return aux_[j];
  };

  for (std::int32_t slot : group) {
    const int cur = beam.current[slot];
    const double time = beam.resource[slot];
    for (int j : graph_.out_edges(cur)) {
      if (TestBit(visited, j)) continue;
      const double arrival = time + c(cur, j);
      if (arrival > windows[j].close) continue;
      const double start = std::max(arrival, windows[j].open);
      if (start > latest_departure(j) + kLookaheadTolerance) continue;
      Candidate cand;
      cand.cost = beam.cost[slot] + c(cur, j);
      cand.resource = start;
      cand.heat = beam.heat[slot] + tables_.heat(cur, j);
      cand.potential = ChildPotential(beam, first, j);
      cand.score = MakeScore(cand.cost, cand.heat, cand.potential);
      if (cand.score < floor) continue;
      cand.node = j;
      cand.action = j;
      cand.parent = slot;
      sink.push_back(cand);
    }
  }
  if (config_.dominance) ParetoByNode(raw_, /*maximize=*/false, out);
}

void Expander::ParetoByNode(std::vector<Candidate>& raw, bool maximize,
                            std::vector<Candidate>& out) const {
  const ParetoOrder order{maximize};
  std::sort(raw.begin(), raw.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.node != b.node) return a.node < b.node;
    return order(a, b);
  });
  std::size_t begin = 0;
  while (begin < raw.size()) {
    std::size_t end = begin + 1;
    while (end < raw.size() && raw[end].node == raw[begin].node) ++end;
    ScanFront(std::span<const Candidate>(raw.data() + begin, end - begin),
              maximize, out);
    begin = end;
  }
}

std::optional<Completion> Expander::BestCompletion(const Beam& beam) const {
  const CostMatrix& c = instance_.costs();
  std::optional<Completion> best;
  for (std::size_t slot = 0; slot < beam.size(); ++slot) {
    const int cur = beam.current[slot];
    if (!graph_.HasEdge(cur, kDepot)) continue;
    if (instance_.kind() == ProblemKind::kTsptw &&
        beam.resource[slot] + c(cur, kDepot) > instance_.time_windows()[kDepot].close) {
      continue;
    }
    Candidate last;
    last.cost = beam.cost[slot] + c(cur, kDepot);
    last.heat = beam.heat[slot] +
                (instance_.kind() == ProblemKind::kVrp ? 0.0
                                                       : tables_.heat(cur, kDepot));
    last.potential = 0.0;
    last.score = MakeScore(last.cost, last.heat, 0.0);
    last.node = kDepot;
    last.action = kDepot;
    last.parent = static_cast<std::int32_t>(slot);
    if (!best || last.cost < best->last.cost ||
        (last.cost == best->last.cost && RanksBefore(last, best->last))) {
      best = Completion{last};
    }
  }
  return best;
}

Beam Expander::Materialize(const Beam& parents,
                           std::span<const Candidate> selected) const {
  Beam next(parents.n, parents.with_potential);
  next.Resize(selected.size());
  const std::size_t w = parents.w;
  const std::size_t n = parents.n;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const Candidate& cand = selected[k];
    const std::size_t p = static_cast<std::size_t>(cand.parent);
    std::copy_n(parents.visited_words.begin() + p * w, w,
                next.visited_words.begin() + k * w);
    SetBit(next.visited(k), cand.node);
    next.cost[k] = cand.cost;
    next.resource[k] = cand.resource;
    next.heat[k] = cand.heat;
    next.potential[k] = cand.potential;
    next.score[k] = cand.score;
    next.current[k] = cand.node;
    next.parent[k] = cand.parent;
    if (next.with_potential) {
      std::span<double> np(next.node_potential.data() + k * n, n);
      std::span<double> ex(next.exhausted.data() + k * n, n);
      std::copy_n(parents.node_potential.begin() + p * n, n, np.begin());
      std::copy_n(parents.exhausted.begin() + p * n, n, ex.begin());
      ApplyVisit(tables_, cand.node, np, ex);
    }
  }
  return next;
}

std::vector<int> Trace::Backtrack(std::int32_t final_slot, int final_action) const {
  std::vector<int> actions{final_action};
  std::int32_t slot = final_slot;
  for (std::size_t t = steps_.size(); t-- > 0;) {
    const auto& record = steps_[t];
    if (slot < 0 || static_cast<std::size_t>(slot) >= record.size()) {
      throw InternalError("trace: invalid parent index " + std::to_string(slot) +
                          " at step " + std::to_string(t));
    }
    actions.push_back(record[slot].action);
    slot = record[slot].parent;
  }
  if (slot != 0) {
    throw InternalError("trace does not lead back to the initial solution");
  }
  std::reverse(actions.begin(), actions.end());
  return actions;
}

SolveResult Solve(const Instance& instance, const PolicyTables& tables,
                  const SparseGraph& graph, const SolverConfig& config) {
  if (config.beam_size < 1) throw ValidationError("beam size must be >= 1");
  Expander expander(instance, tables, graph, config);
  Beam beam = InitBeam(instance, tables, config);
  Trace trace;
  SolveResult result;
  std::vector<Candidate> group_out;

  for (int step = 0;; ++step) {
    result.stats.steps = static_cast<std::size_t>(step);
    result.stats.max_beam = std::max(result.stats.max_beam, beam.size());
    if (expander.IsFinal(beam)) {
      const auto done = expander.BestCompletion(beam);
      if (!done) {
        result.dead_step = step;
        return result;
      }
      auto actions = trace.Backtrack(done->last.parent, done->last.action);
      result.solution = MakeSolution(instance, std::move(actions), &graph);
      return result;
    }

    const Grouping grouping = GroupByVisited(beam);
    TopBSelector selector(config.beam_size);
    for (std::size_t g = 0; g < grouping.groups(); ++g) {
      group_out.clear();
      const double floor =
          config.score_bound_prefilter ? selector.Bound() : -kInf;
      expander.ExpandGroup(beam, grouping.group(g), floor, group_out);
      result.stats.candidates += group_out.size();
      for (const Candidate& cand : group_out) selector.Offer(cand);
    }
    std::vector<Candidate> selected = selector.Take();
    if (selected.empty()) {
      result.dead_step = step;
      return result;
    }
    std::vector<TraceStep> record(selected.size());
    for (std::size_t k = 0; k < selected.size(); ++k) {
      record[k] = {selected[k].parent, selected[k].action};
    }
    trace.Push(std::move(record));
    beam = expander.Materialize(beam, selected);
  }
}

namespace {

Heatmap ForProblem(const Instance& instance, Heatmap heat) {
  if (instance.kind() != ProblemKind::kTsptw && heat.directed()) {
    return Symmetrize(heat);
  }
  return heat;
}

void CheckHeatmapSize(const Instance& instance, const Heatmap* supplied) {
  if (supplied != nullptr && supplied->size() != instance.size()) {
    throw ValidationError("heatmap has " + std::to_string(supplied->size()) +
                          " nodes, instance has " +
                          std::to_string(instance.size()));
  }
}

}  // namespace

Heatmap PolicyHeatmap(const Instance& instance, const Heatmap* supplied,
                      PolicyKind policy, bool invert_cost_heat) {
  CheckHeatmapSize(instance, supplied);
  if (UsesCostHeat(policy) || supplied == nullptr) {
    return ForProblem(instance, CostHeatmap(instance.costs(), invert_cost_heat));
  }
  return ForProblem(instance, *supplied);
}

PolicyTables MakePolicyTables(const Instance& instance, const Heatmap* supplied,
                              PolicyKind policy, bool invert_cost_heat) {
  const Heatmap heat =
      PolicyHeatmap(instance, supplied, policy, invert_cost_heat);
  return PolicyTables(heat, instance.costs(), instance.kind(),
                      UsesPotential(policy));
}

SparseGraph MakeGraph(const Instance& instance, const Heatmap* supplied,
                      const Sparsification& sparsify, bool invert_cost_heat) {
  CheckHeatmapSize(instance, supplied);
  const bool vrp = instance.kind() == ProblemKind::kVrp;
  switch (sparsify.mode) {
    case Sparsification::Mode::kComplete:
      return SparseGraph::Complete(instance.size());
    case Sparsification::Mode::kKnn:
      return SparsifyKnn(instance.costs(), sparsify.knn, vrp);
    case Sparsification::Mode::kThreshold: {
      if (!(sparsify.threshold >= 0.0 && sparsify.threshold < 1.0)) {
        throw ValidationError("threshold must lie in [0, 1)");
      }
      const Heatmap heat =
          supplied != nullptr
              ? ForProblem(instance, *supplied)
              : ForProblem(instance,
                           CostHeatmap(instance.costs(), invert_cost_heat));
      SparseGraph graph = SparsifyThreshold(heat, sparsify.threshold);
      return vrp ? graph.WithDepotConnected(kDepot) : graph;
    }
  }
  throw ValidationError("unknown sparsification mode");
}

SolveResult Solve(const Instance& instance, const Heatmap* supplied,
                  const SolveOptions& options) {
  const PolicyTables tables = MakePolicyTables(
      instance, supplied, options.solver.policy, options.invert_cost_heat);
  const SparseGraph graph =
      MakeGraph(instance, supplied, options.sparsify, options.invert_cost_heat);
  return Solve(instance, tables, graph, options.solver);
}

}  // namespace dpdp
